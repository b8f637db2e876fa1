"""Poisson brackets of phase polynomials and the superintegrability checks.

Sign convention: {F, G} = sum dF/dp dG/dq - dF/dq dG/dp, so {P_y, y} = 1 and
{P_y, S2} = dS2/dy = S1.

Writing Pi = w(a) P_a with w = a/x', two monomials
A = f y^j Pi^p P_y^q and B = g y^m Pi^r P_y^s give

    {A, B} = w (p f g' - r f' g) y^(j+m) Pi^(p+r-1) P_y^(q+s)
           + (q m - j s) f g y^(j+m-1) Pi^(p+r) P_y^(q+s-1)

(the w' contributions of the two Pi-derivatives cancel), so no raw P_a
ever appears.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .model import Model
from .phase import PhasePolynomial
from .radical import RadicalElement, RationalFunction

__all__ = [
    "BracketContext",
    "CheckResult",
    "SuperintegrabilityReport",
    "poisson",
    "poisson_at",
    "is_zero",
    "verify_superintegrability",
    "verify_superintegrability_numeric",
    "random_phase_points",
]


class BracketContext:
    """Holds w = a/x' for one model; immutable once built."""

    __slots__ = ("basis", "w", "dx")

    def __init__(self, dx: RadicalElement):
        if dx.is_zero():
            raise ZeroDivisionError("x' vanishes identically; Pi = (a/x') P_a is undefined")
        self.basis = dx.basis
        self.dx = dx
        self.w = dx.invert() * RationalFunction.from_coeffs([0, 1])

    @classmethod
    def for_model(cls, model: Model) -> "BracketContext":
        return cls(model.coeffs.dx)


def poisson(A: PhasePolynomial, B: PhasePolynomial, ctx: BracketContext) -> PhasePolynomial:
    dA: dict = {}
    dB: dict = {}

    def deriv(cache, key, c):
        if key not in cache:
            cache[key] = c.diff()
        return cache[key]

    wpart: dict = {}
    plain: dict = {}

    def acc(store, key, val):
        if key in store:
            store[key] = store[key] + val
        else:
            store[key] = val

    for (j, p, q), f in A.terms.items():
        for (m, r, s), g in B.terms.items():
            if p or r:
                val = None
                if p:
                    val = f * deriv(dB, (m, r, s), g) * p
                if r:
                    t = deriv(dA, (j, p, q), f) * g * (-r)
                    val = t if val is None else val + t
                if val is not None and not val.is_zero():
                    acc(wpart, (j + m, p + r - 1, q + s), val)
            coef = q * m - j * s
            if coef:
                acc(plain, (j + m - 1, p + r, q + s - 1), f * g * coef)
    for key, val in wpart.items():
        acc(plain, key, ctx.w * val)
    return PhasePolynomial(plain)


def is_zero(P: PhasePolynomial) -> bool:
    return P.is_zero()


@dataclass
class CheckResult:
    name: str
    passed: bool
    mode: str
    detail: str = ""
    terms: int = 0
    seconds: float = 0.0
    residual: list[str] = field(default_factory=list)

    def status(self) -> str:
        if self.mode == "exact":
            return "exact-zero" if self.passed else "nonzero"
        return "pass" if self.passed else "fail"


@dataclass
class SuperintegrabilityReport:
    label: str
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _relations(model: Model):
    Py = PhasePolynomial({(0, 0, 1): RadicalElement.constant(model.spec.basis, 1)})
    H = model.H
    return Py, [
        ("{H,Py} = 0", H, Py, None),
        ("{H,S1} = 0", H, model.S1, None),
        ("{H,S2} = 0", H, model.S2, None),
        ("{Py,S1} = G", Py, model.S1, model.G),
        ("{Py,S2} = S1", Py, model.S2, model.S1),
    ]


def verify_superintegrability(model: Model, ctx: BracketContext | None = None) -> SuperintegrabilityReport:
    """Exact check of the five bracket relations."""
    ctx = BracketContext.for_model(model) if ctx is None else ctx
    _, rels = _relations(model)
    checks = []
    for name, A, B, target in rels:
        t0 = time.perf_counter()
        br = poisson(A, B, ctx)
        res = br if target is None else br - target
        dt = time.perf_counter() - t0
        checks.append(
            CheckResult(
                name=name,
                passed=res.is_zero(),
                mode="exact",
                terms=br.coefficient_terms(),
                seconds=dt,
                residual=res.leading_terms(),
            )
        )
    return SuperintegrabilityReport(model.spec.label(), checks)


# ----------------------------------------------------------------------
# numeric route


def _mpq(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def random_phase_points(model: Model, count: int, rng: random.Random) -> list[tuple[Fraction, ...]]:
    """Rational phase points (a, y, P_a, P_y) with a in the middle 80% of the domain.

    Staying off the root boundary keeps the Delta**(-k) blow-up from eating the
    working precision.  The momentum is drawn as Pi = (a/x') P_a in [-1, 1]
    (bounded energy) and converted back to P_a; drawing P_a directly makes Pi
    enormous wherever x' is small, and Pi**(2n) then swamps 40 digits.
    """
    lo, hi = model.spec.domain
    if lo is None and hi is None:
        lo, hi = Fraction(-3), Fraction(3)
    elif lo is None:
        lo = hi - 4
    elif hi is None:
        hi = lo + 4
    dx = model.coeffs.dx
    pts = []
    for _ in range(count):
        u = Fraction(rng.randint(100, 900), 1000)
        a = lo + (hi - lo) * u
        y, Pi, Py = (Fraction(rng.randint(-1000, 1000), 1000) for _ in range(3))
        Pa = Fraction(float(_mpq(Pi) * dx.eval_numeric(a, dps=30) / _mpq(a))) if a else Pi
        pts.append((a, y, Pa, Py))
    return pts


def poisson_at(A: PhasePolynomial, B: PhasePolynomial, dx: RadicalElement, point, dps: int) -> mpmath.mpf:
    """Value of {A, B} at (a, y, P_a, P_y) from numeric coefficient values and derivatives."""
    with mpmath.workdps(dps):
        a, y, Pa, Py = (_mpq(v) if isinstance(v, Fraction) else mpmath.mpf(v) for v in point)
        w = a / dx.eval_numeric(a)
        Pi = w * Pa

        def vals(P):
            out = {}
            for k, c in P.terms.items():
                out[k] = (c.eval_numeric(a), c.diff().eval_numeric(a))
            return out

        va, vb = vals(A), vals(B)
        total = mpmath.mpf(0)
        for (j, p, q), (f, df) in va.items():
            for (m, r, s), (g, dg) in vb.items():
                if p or r:
                    total += w * (p * f * dg - r * df * g) * y ** (j + m) * Pi ** (p + r - 1) * Py ** (q + s)
                coef = q * m - j * s
                if coef:
                    total += coef * f * g * y ** (j + m - 1) * Pi ** (p + r) * Py ** (q + s - 1)
        return +total


def verify_superintegrability_numeric(
    model: Model, *, points: int = 20, dps: int = 40, seed: int = 0, tol: float = 1e-25
) -> SuperintegrabilityReport:
    """The same five relations evaluated at random admissible phase points."""
    rng = random.Random(seed)
    pts = random_phase_points(model, points, rng)
    _, rels = _relations(model)
    dx = model.coeffs.dx
    checks = []
    for name, A, B, target in rels:
        t0 = time.perf_counter()
        worst = mpmath.mpf(0)
        with mpmath.workdps(dps):
            for pt in pts:
                val = poisson_at(A, B, dx, pt, dps)
                if target is not None:
                    a, y, Pa, Py = (_mpq(v) for v in pt)
                    Pi = a / dx.eval_numeric(a) * Pa
                    val -= target.eval_numeric(a, y, Pi, Py)
                worst = max(worst, abs(val))
        checks.append(
            CheckResult(
                name=name,
                passed=bool(worst < tol),
                mode="numeric",
                detail=f"max |residual| = {mpmath.nstr(worst, 5)} over {points} points at {dps} digits",
                seconds=time.perf_counter() - t0,
            )
        )
    return SuperintegrabilityReport(model.spec.label(), checks)
