from __future__ import annotations

import random
from fractions import Fraction as Fr

import mpmath
import pytest
from hypothesis import given, strategies as st

from siflow.appendix import (
    IdentityCase,
    NovichkovParams,
    operator_sum_sides,
    check_operator_sum,
    check_deflation_identities,
    check_antiderivative,
    deflate_mixed_dropping_simple_root,
    hypergeometric_denominator_scan,
    novichkov_residuals,
    random_novichkov_params,
    run_suite,
)
from siflow.integrals import hyp2f1_terminating, hyp2f1_terms, integral_general, integral_simple_partner
from siflow.radical import RadicalBasis, RadicalElement, RationalFunction
from siflow.symmetric import RootMultiset


# ---------------------------------------------------------------- operator sum


@pytest.mark.parametrize("r,rest", [(2, [(3, 1)]), (3, [(-1, 1), (2, 1)]), (4, [])])
def test_top_operator_sum_vanishes_below_multiplicity(r, rest):
    F = RootMultiset([(Fr(1, 2), r)] + rest)
    poly = RationalFunction.from_coeffs(F.coefficients())
    for l in range(1, r + 1):
        lhs, rhs = operator_sum_sides(poly, Fr(1, 2), 1, 0, F.degree, l)
        assert lhs.is_zero() and rhs.is_zero()


def test_operator_sum_quadratic_example():
    F = RationalFunction.from_coeffs([3, -4, 1])  # (a-1)(a-3)
    lhs, rhs = operator_sum_sides(F, 1, 1, 1, 2, 1)
    assert not lhs.is_zero()
    assert lhs == rhs


def test_operator_sum_single_term_boundary():
    F = RootMultiset([(2, 2), (-1, 1)])
    for k in range(4):
        assert check_operator_sum(F, k, k, 2, root=-1, sign=1)


@given(
    st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=1, max_size=4),
    st.integers(0, 4),
    st.integers(0, 4),
    st.integers(1, 3),
    st.sampled_from([1, -1]),
)
def test_operator_sum_random(coeffs, p, dk, l, sign):
    F = RationalFunction.from_coeffs(coeffs)
    assert check_operator_sum(F, p, p + dk, l, root=Fr(1, 3), sign=sign)


# ---------------------------------------------------------------- deflation identities


def test_deflation_identities_small():
    out = check_deflation_identities(RootMultiset([(1, 2), (2, 1)]))
    assert out == {k: True for k in ("deflate-multiple", "deflate-simple", "deflate-mixed", "geometric-deflation")}


def test_deflation_identities_full_sweep():
    assert all(check_deflation_identities(RootMultiset([(1, 3), (2, 1), (-1, 1)])).values())


def test_only_multiple_identity_without_simple_roots():
    assert check_deflation_identities(RootMultiset([(1, 2), (2, 3)])) == {"deflate-multiple": True}


def test_mixed_identity_needs_the_simple_root_deflated():
    assert not deflate_mixed_dropping_simple_root(RootMultiset([(1, 2), (2, 1)]))


def test_multiple_root_required():
    with pytest.raises(ValueError):
        check_deflation_identities(RootMultiset([(1, 1), (2, 1)]))


# ---------------------------------------------------------------- antiderivatives


def test_pochhammer_sum_example():
    assert check_antiderivative(IdentityCase("pochhammer-sum", l=2, k=0))


def test_partner_antiderivative_l1():
    b = RadicalBasis([(1, 1), (-2, 1)])
    I = integral_simple_partner(b, 0, 1, 1)
    eta = Fr(-3)  # eps_alpha (a_beta - a_alpha)
    expected = RadicalElement.radical(b, 1) * RadicalElement.delta_power(b, 0, -1) * (1 / eta)
    assert I == expected
    half = RadicalElement.delta_power(b, 0, -3) * RadicalElement.delta_power(b, 1, -1) * Fr(1, 2)
    assert I.diff() == half


def test_terminating_series_example():
    assert hyp2f1_terms(Fr(1), -1, Fr(1, 2)) == [1, -2]
    assert hyp2f1_terminating(Fr(1), -1, Fr(1, 2), Fr(3, 7)) == 1 - 2 * Fr(3, 7)


def test_terminating_series_matches_mpmath():
    for b in range(0, 5):
        for c in (Fr(1, 2), Fr(-1, 2), Fr(5, 2)):
            z = Fr(2, 9)
            ours = hyp2f1_terminating(Fr(1), -b, c, z)
            assert float(ours) == pytest.approx(float(mpmath.hyp2f1(1, -b, float(c), float(z))), rel=1e-13)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_hypergeometric_l_M1(l):
    assert check_antiderivative(IdentityCase("hypergeometric", l=l, M=1, roots=(Fr(1), Fr(-2)), signs=(1, 1)))


@given(
    st.integers(1, 4),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=2, max_size=2, unique=True),
    st.sampled_from([1, -1]),
    st.sampled_from([1, -1]),
)
def test_general_with_M0_is_the_partner_form(l, roots, e1, e2):
    b = RadicalBasis(zip(roots, (e1, e2)))
    assert integral_general(b, 0, 1, l, 0) == integral_simple_partner(b, 0, 1, l)


@pytest.mark.parametrize("variant", ["one-plus-u2", "u2-plus-eps", "one-minus-u2"])
@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_u_integrals(variant, l):
    for eps in (1, -1):
        assert check_antiderivative(IdentityCase("u-integral", l=l, variant=variant, eps=eps))


def test_no_surviving_zero_denominator():
    assert hypergeometric_denominator_scan(15, 15) == []


def test_pole_before_termination_raises():
    with pytest.raises(ZeroDivisionError):
        hyp2f1_terms(Fr(1), -3, Fr(-1))


# ---------------------------------------------------------------- suites


def test_suites_pass_and_are_deterministic():
    a = run_suite("all", cases=30, seed=11)
    b = run_suite("all", cases=30, seed=11)
    assert a.ok
    assert [(t.name, t.cases, t.passed) for t in a.tallies] == [(t.name, t.cases, t.passed) for t in b.tallies]


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("D")


# ---------------------------------------------------------------- quartic reduction


def test_novichkov_reference_values():
    res = novichkov_residuals(NovichkovParams(1, 2, 1, 1))
    assert res.ok
    assert (res.B5, res.B6) == (Fr(3, 2), Fr(-1, 2))


def test_novichkov_constants_by_substitution():
    """The quadratic forms, evaluated without subtracting B5/B6, are the constants."""
    res = novichkov_residuals(NovichkovParams(1, 2, 1, 1))
    for a in (Fr(3), Fr(17, 4), Fr(10)):
        with mpmath.workdps(40):
            assert mpmath.almosteq((res.residual_first_form + res.B5).eval_numeric(a, dps=40), mpmath.mpf(3) / 2, 1e-35)
            assert mpmath.almosteq((res.residual_second_form + res.B6).eval_numeric(a, dps=40), -mpmath.mpf(1) / 2, 1e-35)


def test_novichkov_multiple_root_closed_form():
    p = NovichkovParams(3, 3, 2, 5, "multiple")
    assert p.closed_B5() == 4 * Fr(5, 3) * (10 - 6)
    res = novichkov_residuals(p)
    assert res.ok and res.B5 == Fr(80, 3) and res.B6 == Fr(20, 9)


@pytest.mark.parametrize("branch", ["distinct", "multiple"])
def test_novichkov_random(branch):
    rng = random.Random(5)
    for _ in range(15):
        assert novichkov_residuals(random_novichkov_params(branch, rng)).ok


def test_novichkov_wrong_constant_detected():
    p = NovichkovParams(1, 2, 1, 1)
    res = novichkov_residuals(p)
    assert not (res.residual_first_form + Fr(1, 10)).is_zero()


@pytest.mark.parametrize("args", [(0, 2, 1, 1, "distinct"), (1, 1, 1, 1, "distinct"), (1, 2, 1, 1, "multiple")])
def test_novichkov_bad_params(args):
    with pytest.raises(ValueError):
        NovichkovParams(*args)
