from __future__ import annotations

from fractions import Fraction as Fr

import pytest

from siflow.model import (
    ModelSpec,
    SpecError,
    _mu_part_b,
    _Tables,
    apply_op_n,
    assemble_model,
    b_from_btilde,
    build_coefficients,
    build_x,
    op_n_rhs,
    verify_b_recurrence,
)
from siflow.phase import PhasePolynomial
from siflow.radical import RadicalElement
from siflow.sweeps import check_spec, random_specs
from siflow.symmetric import sigma


def dpow(spec, idx, twice):
    return RadicalElement.delta_power(spec.basis, idx, twice)


def test_x_single_simple_root():
    s = ModelSpec(roots=[(3, 1, 1)], xi={3: Fr(2, 5)})
    assert build_x(s) == dpow(s, 0, -1) * Fr(2, 5)


def test_x_double_root():
    s = ModelSpec(roots=[(1, 2, 1)], mu={1: (Fr(1, 3), -2)})
    assert build_x(s) == dpow(s, 0, -1) * Fr(1, 3) + dpow(s, 0, -3) * (-2)


def test_x_odd_single_root():
    s = ModelSpec(roots=[(-2, 1, 1)], parity="odd", xi={-2: 1}, nu=Fr(3, 2))
    a = RadicalElement.variable(s.basis)
    bare = dpow(s, 0, -1) + a * Fr(3, 4)
    assert build_x(s, ode_constant=False) == bare
    # the additive constant nu*sigma_1 makes the inhomogeneous ODE exact
    assert build_x(s) - bare == RadicalElement.constant(s.basis, Fr(3, 2) * -2)
    assert build_x(s).diff() == bare.diff()


def test_op_annihilates_inverse_sqrt():
    s = ModelSpec(roots=[(4, 1, -1)], xi={4: 1})
    assert apply_op_n(s, dpow(s, 0, -1)).is_zero()


def test_op_annihilates_double_root_term():
    s = ModelSpec(roots=[(1, 2, 1)], mu={1: (0, 1)})
    assert apply_op_n(s, dpow(s, 0, -3)).is_zero()
    assert not apply_op_n(s, dpow(s, 0, -5)).is_zero()


def test_op_odd_n2():
    s = ModelSpec(roots=[(1, 1, 1), (-1, 1, 1)], parity="odd", xi={1: 2, -1: 3}, nu=Fr(7, 3))
    a = RadicalElement.variable(s.basis)
    assert apply_op_n(s, build_x(s)) == a * (Fr(5, 2) * Fr(7, 3))
    # without the constant the residual is exactly nu * A_{n-1}
    A = s.F_coefficients()
    res = apply_op_n(s, build_x(s, ode_constant=False)) - op_n_rhs(s)
    assert res == RadicalElement.constant(s.basis, Fr(7, 3) * A[1])


def test_b1_is_minus_x():
    s = ModelSpec(roots=[(2, 1, -1)], xi={2: Fr(5, 2)})
    cs = build_coefficients(s)
    assert cs.b_at(1) == -cs.x
    assert cs.b_at(1) == dpow(s, 0, -1) * Fr(-5, 2)


def test_multiple_root_formula_with_r1_gives_simple_term():
    s = ModelSpec(roots=[(1, 1, 1), (-2, 1, 1), (4, 1, -1)], xi={1: 3, -2: 1, 4: 1})
    tabs = _Tables(s)
    for k in range(1, s.n + 1):
        via_mu = _mu_part_b(s.basis, 0, 1, (Fr(3),), tabs.defl[Fr(1)], k)
        simple = dpow(s, 0, -1) * (3 * tabs.simple[Fr(1)][k - 1])
        assert via_mu == simple


def residuals_zero(spec):
    cs = build_coefficients(spec)
    return [name for name, r in verify_b_recurrence(cs, spec) if not r.is_zero()]


def test_recurrence_n1_terminal():
    s = ModelSpec(roots=[(Fr(1, 2), 1, 1)], xi={Fr(1, 2): 1})
    assert residuals_zero(s) == []


def test_recurrence_n2_simple():
    s = ModelSpec(roots=[(-1, 1, 1), (2, 1, -1)], xi={-1: 1, 2: Fr(1, 3)})
    assert residuals_zero(s) == []


def test_recurrence_n2_double_root():
    s = ModelSpec(roots=[(1, 2, 1)], mu={1: (1, 1)})
    assert residuals_zero(s) == []


def test_recurrence_n3_triple_root():
    s = ModelSpec(roots=[(-1, 3, 1)], mu={-1: (1, Fr(-1, 2), 2)})
    assert residuals_zero(s) == []


def test_recurrence_detects_wrong_x():
    s = ModelSpec(roots=[(1, 2, 1)], mu={1: (1, 1)})
    cs = build_coefficients(s)
    cs.x = cs.x * 2
    assert any(not r.is_zero() for _, r in verify_b_recurrence(cs, s))


def test_b_two_routes_agree():
    for s in random_specs(11, 6, "even") + random_specs(11, 6, "odd"):
        cs = build_coefficients(s)
        assert all(u == v for u, v in zip(b_from_btilde(s, cs.btilde), cs.b)), s.label()


def test_c1_single_simple_root():
    s = ModelSpec(roots=[(2, 1, 1)], xi={2: 3})
    cs = build_coefficients(s)
    assert cs.c_at(1) == dpow(s, 0, -2) * Fr(9, 2)


def test_c_linear_terms_odd():
    s = ModelSpec(roots=[(2, 1, 1), (-1, 1, 1)], parity="odd", xi={2: 0, -1: 0}, nu=3)
    cs = build_coefficients(s)
    a = RadicalElement.variable(s.basis)
    sig = sigma(s.multiset)
    for k in range(s.n + 1):
        assert cs.c_at(k) == a * (Fr((-1) ** (k + 1), 2) * 9 * sig[k])


@pytest.mark.parametrize(
    "spec",
    [
        ModelSpec(roots=[(1, 2, -1), (-2, 1, 1)], mu={1: (Fr(1, 2), 3)}, xi={-2: 5}),
        ModelSpec(roots=[(1, 2, -1), (-2, 2, 1)], mu={1: (Fr(1, 2), 3), -2: (2, -1)}, parity="odd", nu=Fr(3, 2)),
        ModelSpec(roots=[(1, 3, -1), (-2, 2, 1)], mu={1: (Fr(1, 2), 3, 1), -2: (2, -1)}),
    ],
    ids=lambda s: s.label(),
)
def test_c_derivative_relation(spec):
    assert check_spec(spec).ok


def test_G_even_n1():
    s = ModelSpec(roots=[(3, 1, 1)], xi={3: 1})
    m = assemble_model(s)
    one = RadicalElement.constant(s.basis, 1)
    expected = m.H + PhasePolynomial({(0, 0, 2): one * -3})
    assert (m.G - expected).is_zero()


@pytest.mark.parametrize("parity", ["even", "odd"])
def test_integrals_homogeneous_degree(parity):
    for s in random_specs(5, 4, parity, max_n=3):
        m = assemble_model(s)
        deg = 2 * s.n + (1 if parity == "odd" else 0)
        for P in (m.G, m.Q1, m.Q2, m.S1, m.S2):
            assert P.momentum_degrees() == {deg}


def test_S_are_y_polynomials():
    s = ModelSpec(roots=[(1, 2, 1)], mu={1: (1, 1)})
    m = assemble_model(s)
    assert m.S1.y_degree() == 1 and m.S2.y_degree() == 2
    assert (m.S1.d_dy() - m.G).is_zero()
    assert (m.S2.d_dy() - m.S1).is_zero()


@pytest.mark.parametrize(
    "kw",
    [
        dict(roots=[(1, 1, 1), (1, 2, 1)]),
        dict(roots=[(1, 2, 1)], mu={1: (1,)}),
        dict(roots=[(1, 1, 1)]),
        dict(roots=[(1, 1, 1)], xi={1: 1}, parity="odd"),
        dict(roots=[(1, 1, 1)], xi={1: 1}, nu=2),
        dict(roots=[(1, 1, -1), (2, 1, 1)], xi={1: 1, 2: 1}),
        dict(roots=[(1, 1, 1)], xi={1: 1}, n=2),
        dict(roots=[(1, 1, 1)], xi={1: 1}, domain=(0, 5)),
        dict(roots=[(1, 1, 0)], xi={1: 1}),
    ],
)
def test_spec_errors(kw):
    with pytest.raises(SpecError):
        ModelSpec(**kw)
