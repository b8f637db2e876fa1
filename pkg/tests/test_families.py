from __future__ import annotations

import math
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from siflow.families import (
    FAMILIES,
    GlobalExampleSpec,
    a_of_u,
    classify_global,
    curvature,
    mu_profile,
    omega_transform,
    to_model_spec,
    u_interval,
)
from siflow.geodesic import profile_table
from siflow.model import SpecError
from siflow.radical import DomainError
from siflow.symmetric import pochhammer_ratio

EXAMPLES = {
    "even-h2": GlobalExampleSpec("even-h2", mu=(1, 2), simple=((-4, 1, 1),)),
    "even-r2": GlobalExampleSpec("even-r2", mu=(1, 1), nu=(2,), a1=1, a2=4),
    "odd-disk": GlobalExampleSpec("odd-disk", mu=(1, Fr(1, 2))),
    "odd-plus": GlobalExampleSpec("odd-plus", mu=(1, 2)),
    "odd-minus": GlobalExampleSpec("odd-minus", mu=(Fr(3, 10), Fr(1, 5))),
    "odd-exterior": GlobalExampleSpec("odd-exterior", mu=(1, 1)),
}


def test_curvature_constant_profile():
    for u in (0.1, 0.5, 3.0, 40.0):
        assert curvature((lambda v: 1.0, lambda v: 0.0), u) == -1.0


def test_curvature_linear_profile():
    for u in (0.25, 1.0, 2.0):
        assert curvature((lambda v: v, lambda v: 1.0), u) == pytest.approx(-2 / u**2, rel=1e-15)


def test_curvature_singularity():
    with pytest.raises(ZeroDivisionError):
        curvature((lambda v: 0.0, lambda v: 1.0), 0.5)


def test_curvature_finite_on_disk_family():
    prof = mu_profile(EXAMPLES["odd-disk"])
    for u in (0.01, 0.3, 0.7, 0.99):
        assert math.isfinite(curvature(prof, u))


def test_profile_derivative_matches_finite_difference():
    for g in EXAMPLES.values():
        prof = mu_profile(g)
        lo, hi = u_interval(g)
        u = lo + 0.37 if math.isinf(hi) else (lo + hi) / 2
        h = 1e-6
        fd = (prof.value(u + h) - prof.value(u - h)) / (2 * h)
        assert prof.derivative(u) == pytest.approx(fd, rel=1e-6)


def test_disk_omega_closed_form():
    g = GlobalExampleSpec("odd-disk", mu=(1,))
    for u in (0.1, 0.5, 0.9):
        om, t = omega_transform(g, u)
        assert om == pytest.approx(1 + 1 / math.sqrt(1 - u * u), rel=1e-15)
        assert t == pytest.approx(u * om)


@pytest.mark.parametrize("family", FAMILIES)
def test_omega_against_quadrature(family):
    g = EXAMPLES[family]
    prof = mu_profile(g)
    lo, hi = u_interval(g)
    hi = lo + 5 if math.isinf(hi) else hi
    rng = random.Random(family)
    for _ in range(50):
        u1, u2 = sorted(rng.uniform(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo)) for _ in range(2))
        t1, t2 = omega_transform(g, u1)[1], omega_transform(g, u2)[1]
        ref, err = quad(prof.value, u1, u2, epsabs=1e-14, epsrel=1e-13, limit=200)
        assert abs((t2 - t1) - ref) < 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("family", ["even-h2", "odd-disk", "odd-plus", "odd-minus"])
def test_time_starts_at_zero(family):
    g = EXAMPLES[family]
    for u in (1e-3, 1e-6, 1e-9):
        assert abs(omega_transform(g, u)[1]) < 10 * u * max(1.0, mu_profile(g).value(u))
    ref, _ = quad(mu_profile(g).value, 0, 0.5, epsabs=1e-14, epsrel=1e-13)
    assert omega_transform(g, 0.5)[1] == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
def test_profile_is_twice_model_slope(family):
    g = EXAMPLES[family]
    table = profile_table(to_model_spec(g))
    prof = mu_profile(g)
    lo, hi = u_interval(g)
    hi = lo + 5 if math.isinf(hi) else hi
    for frac in (0.2, 0.5, 0.8):
        u = lo + frac * (hi - lo)
        xp = float(table.xprime(a_of_u(g, u)))
        if family == "even-h2":
            xp /= (1 + u * u) ** 1.5
        assert prof.value(u) == pytest.approx(2 * xp, rel=1e-12)


def test_omega_outside_interval():
    with pytest.raises(DomainError):
        omega_transform(EXAMPLES["odd-disk"], 1.5)
    with pytest.raises(DomainError):
        omega_transform(EXAMPLES["odd-exterior"], 0.5)


@pytest.mark.parametrize("family", FAMILIES)
def test_examples_classified(family):
    res = classify_global(EXAMPLES[family])
    assert res.accepted, res.reason
    assert res.tag == EXAMPLES[family].manifold
    assert all(res.checks.values())


def test_bound_inside_accepted():
    g = GlobalExampleSpec("odd-minus", mu=(Fr(3, 10), Fr(1, 5)))
    assert g.weighted_mu_sum() == Fr(9, 10)
    assert classify_global(g).tag == "H2"


def test_bound_violated_rejected():
    g = GlobalExampleSpec("odd-minus", mu=(Fr(3, 5), Fr(3, 10)))
    assert g.weighted_mu_sum() == Fr(3, 2)
    res = classify_global(g)
    assert res.tag == "rejected" and "bound" in res.reason


def test_exterior_example_is_plane():
    assert classify_global(GlobalExampleSpec("odd-exterior", mu=(1, 1))).tag == "R2"


@pytest.mark.parametrize(
    "g",
    [
        GlobalExampleSpec("odd-plus", mu=(1, -1)),
        GlobalExampleSpec("even-r2", mu=(1,), nu=(1,), a1=3, a2=2),
        GlobalExampleSpec("even-h2", mu=(1,), simple=((Fr(1, 2), 1, 1),)),
    ],
)
def test_constraint_violations_rejected(g):
    assert classify_global(g).tag == "rejected"


def test_bad_family_parameters():
    with pytest.raises(SpecError):
        GlobalExampleSpec("odd-torus", mu=(1,))
    with pytest.raises(SpecError):
        GlobalExampleSpec("odd-disk", mu=(1,), nu=(1,))
    with pytest.raises(SpecError):
        GlobalExampleSpec("even-r2", mu=(1,))


@given(
    st.lists(st.fractions(min_value=Fr(1, 100), max_value=1, max_denominator=100), min_size=1, max_size=4),
    st.floats(0, 50),
)
def test_weighted_bound_chain(mus, u):
    # sum_l (mu_l/P_l) sum_s P_s / (1+u^2)^(s-1/2) <= sum_l (2l-1) mu_l
    lhs = 0.0
    for l, m in enumerate(mus, start=1):
        inner = sum(float(pochhammer_ratio(s)) / (1 + u * u) ** (s - 0.5) for s in range(1, l + 1))
        lhs += float(m) / float(pochhammer_ratio(l)) * inner
    rhs = sum((2 * l - 1) * float(m) for l, m in enumerate(mus, start=1))
    assert lhs <= rhs * (1 + 1e-12)


@given(st.lists(st.fractions(min_value=Fr(1, 100), max_value=Fr(1, 3), max_denominator=100), min_size=1, max_size=3))
def test_odd_minus_profile_positive_under_bound(mus):
    g = GlobalExampleSpec("odd-minus", mu=tuple(mus))
    prof = mu_profile(g)
    if g.weighted_mu_sum() < 1:
        assert all(prof.value(u) > 0 for u in (0.0, 0.1, 0.5, 1.0, 3.0, 30.0))
