from __future__ import annotations

from fractions import Fraction as Fr

import pytest
import sympy
from hypothesis import given, strategies as st

from siflow.symmetric import (
    RootMultiset,
    elementary_symmetric,
    pochhammer,
    pochhammer_ratio,
    sigma,
    sigma_deflated,
)


def test_sigma_examples():
    assert sigma(RootMultiset([(1, 1), (2, 1)])).as_list() == [1, 3, 2]
    assert sigma(RootMultiset([(5, 1)])).as_list() == [1, 5]
    assert sigma(RootMultiset([(1, 2), (2, 1)])).as_list() == [1, 4, 5, 2]


def test_deflated_examples():
    assert sigma_deflated(RootMultiset([(1, 1), (2, 1)]), 1, 1).as_list() == [1, 2]
    assert sigma_deflated(RootMultiset([(1, 2), (2, 1)]), 1, 2).as_list() == [1, 2]


def test_out_of_range_access_is_zero():
    t = sigma(RootMultiset([(1, 1)]))
    assert t[-1] == 0 and t[5] == 0


def test_pochhammer_ratio_examples():
    assert [pochhammer_ratio(l) for l in (1, 2, 3)] == [1, Fr(1, 2), Fr(3, 8)]
    with pytest.raises(ValueError):
        pochhammer_ratio(0)


def test_invalid_deflation():
    F = RootMultiset([(1, 2), (2, 1)])
    with pytest.raises(ValueError):
        sigma_deflated(F, 1, 3)
    with pytest.raises(ValueError):
        sigma_deflated(F, i=1)  # 1 is not simple


roots = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def multisets(draw, need_multiple=False):
    values = draw(st.lists(roots, min_size=1, max_size=4, unique=True))
    mults = [draw(st.integers(1, 3)) for _ in values]
    if need_multiple:
        mults[0] = max(mults[0], 2)
    return RootMultiset(zip(values, mults))


@given(multisets())
def test_coefficients_match_sympy_expansion(F):
    t = sympy.Symbol("t")
    poly = sympy.Poly(sympy.prod([(t - sympy.Rational(r.numerator, r.denominator)) ** m for r, m in F.entries]), t)
    expected = [Fr(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    assert F.coefficients() == expected


@given(multisets(need_multiple=True))
def test_deflation_recursion(F):
    # dividing by one more factor (t - a): e^(s-1)_k = e^(s)_k + a e^(s)_(k-1)
    a, m = F.entries[0]
    for s in range(1, m + 1):
        lo, hi = sigma_deflated(F, a, s - 1), sigma_deflated(F, a, s)
        for k in range(len(lo)):
            assert lo[k] == hi[k] + a * hi[k - 1]


@given(st.lists(roots, max_size=6))
def test_elementary_symmetric_generating_function(rs):
    e = elementary_symmetric(rs)
    x = Fr(3, 7)
    lhs = sum(c * x**k for k, c in enumerate(e))
    rhs = Fr(1)
    for r in rs:
        rhs *= 1 + r * x
    assert lhs == rhs


@given(st.fractions(min_value=-3, max_value=3, max_denominator=4), st.integers(0, 6), st.integers(0, 6))
def test_pochhammer_splits(x, j, k):
    assert pochhammer(x, j + k) == pochhammer(x, j) * pochhammer(x + j, k)
