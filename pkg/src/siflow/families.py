"""Globally defined example families: parameters, conformal profiles and classification.

Each family fixes F and x so that, after a change of variable u(a), the metric
becomes conformal to mu(u)**2 du**2 + dy**2 over u**2 (possibly times a
nonvanishing factor).  The new coordinate t = u Omega(u) = int mu du is given
in closed form, and the manifold is H^2 or R^2 depending on the range of t.

Family tags
    even-h2        F = (a - 1)**r * prod (a - a_i), 0 < a < 1, u = sqrt(a/(1-a))
    even-r2        F = (a - a1)**r1 (a - a2)**r2 * prod (a - a_i), 0 < a1 < a < a2, u = sqrt(a)
    odd-disk       F = (a - 1)**r,  Delta = 1 - a, u in (0, 1)
    odd-plus       F = (a + 1)**r,  Delta = 1 + a, mu decreasing to 1
    odd-minus      F = (a + 1)**r,  Delta = 1 + a, mu increasing to 1 (needs sum (2l-1) mu_l < 1)
    odd-exterior   F = (a - 1)**r,  Delta = a - 1, u in (1, oo)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .integrals import integral_simple_partner
from .model import ModelSpec, RootSpec, SpecError
from .radical import DomainError, RadicalBasis, RadicalElement
from .symmetric import pochhammer_ratio

__all__ = [
    "FAMILIES",
    "GlobalExampleSpec",
    "MuProfile",
    "ClassifyResult",
    "to_model_spec",
    "mu_profile",
    "u_interval",
    "a_of_u",
    "u_of_a",
    "curvature",
    "omega_transform",
    "classify_global",
]

FAMILIES = ("even-h2", "even-r2", "odd-disk", "odd-plus", "odd-minus", "odd-exterior")
_MANIFOLD = {
    "even-h2": "H2",
    "even-r2": "R2",
    "odd-disk": "H2",
    "odd-plus": "H2",
    "odd-minus": "H2",
    "odd-exterior": "R2",
}
P = pochhammer_ratio


@dataclass(frozen=True)
class GlobalExampleSpec:
    """``mu`` holds mu_1..mu_r at the (first) multiple root; ``nu`` the mu's at a2 for even-r2.

    ``simple`` lists extra simple roots as (a_i, eps_i, xi_i) (even families only).
    ``a1``, ``a2`` are only read by even-r2.
    """

    family: str
    mu: tuple = ()
    nu: tuple = ()
    simple: tuple = ()
    a1: Fraction = Fraction(1)
    a2: Fraction = Fraction(2)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        object.__setattr__(self, "mu", tuple(Fraction(m) for m in self.mu))
        object.__setattr__(self, "nu", tuple(Fraction(m) for m in self.nu))
        object.__setattr__(
            self, "simple", tuple((Fraction(r), int(e), Fraction(x)) for r, e, x in self.simple)
        )
        object.__setattr__(self, "a1", Fraction(self.a1))
        object.__setattr__(self, "a2", Fraction(self.a2))
        if not self.mu:
            raise SpecError("at least one mu parameter is required")
        if self.family.startswith("odd") and (self.simple or self.nu):
            raise SpecError("odd families take only mu parameters")
        if self.family == "even-r2" and not self.nu:
            raise SpecError("even-r2 needs at least one nu parameter (a2 must be a root)")
        if self.family != "even-r2" and self.nu:
            raise SpecError("nu parameters only apply to even-r2")

    @property
    def r(self) -> int:
        return len(self.mu)

    @property
    def manifold(self) -> str:
        return _MANIFOLD[self.family]

    def weighted_mu_sum(self) -> Fraction:
        return sum((2 * l - 1) * m for l, m in enumerate(self.mu, start=1))


# ----------------------------------------------------------------------
# parameter constraints


def _violations(g: GlobalExampleSpec) -> list[str]:
    out = []
    fam = g.family
    if fam == "even-h2":
        if any(m < 0 for m in g.mu):
            out.append("mu_l >= 0 violated")
        for a_i, e, x in g.simple:
            if not ((a_i < 0 and e == 1) or (a_i > 1 and e == -1)):
                out.append(f"simple root {a_i} with sign {e:+d} must satisfy a_i < 0 (sign +1) or a_i > 1 (sign -1)")
            if x < 0:
                out.append(f"xi >= 0 violated at root {a_i}")
        if all(m == 0 for m in g.mu) and all(x == 0 for _, _, x in g.simple):
            out.append("all parameters vanish, so mu(u) = 0")
    elif fam == "even-r2":
        if not (0 < g.a1 < g.a2):
            out.append("0 < a1 < a2 violated")
        if any(m <= 0 for m in g.mu) or any(v <= 0 for v in g.nu):
            out.append("strict positivity of mu_l and nu_l violated")
        for a_i, e, x in g.simple:
            if g.a1 <= a_i <= g.a2:
                out.append(f"simple root {a_i} lies in [a1, a2]")
            elif (a_i < g.a1 and e != 1) or (a_i > g.a2 and e != -1):
                out.append(f"sign of simple root {a_i} makes its Delta negative on (a1, a2)")
            if x <= 0:
                out.append(f"xi > 0 violated at root {a_i}")
    else:
        if any(m <= 0 for m in g.mu):
            out.append("strict positivity of mu_l violated")
        if fam == "odd-minus" and g.weighted_mu_sum() >= 1:
            out.append(f"bound sum (2l-1) mu_l < 1 violated (value {g.weighted_mu_sum()})")
    return out


def _exact_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _root_entry(value, sign, params):
    """RootSpec plus its parameters, as a simple root when only one parameter is given."""
    value = Fraction(value)
    if len(params) == 1:
        return RootSpec(value, 1, sign), {}, {value: params[0]}
    return RootSpec(value, len(params), sign), {value: tuple(params)}, {}


def to_model_spec(g: GlobalExampleSpec) -> ModelSpec:
    """The exact model whose profile reproduces the family's mu(u)."""
    roots, mu, xi = [], {}, {}

    def add(entry):
        spec, m, x = entry
        roots.append(spec)
        mu.update(m)
        xi.update(x)

    fam = g.family
    if fam == "even-h2":
        add(_root_entry(1, -1, [m / 2 for m in g.mu]))
        for a_i, e, x in g.simple:
            s = _exact_sqrt(-e * a_i)
            if s is None:
                raise SpecError(f"-eps_i a_i = {-e * a_i} must be a rational square for exact coefficients")
            add(_root_entry(a_i, e, [-e * x * s**3]))
        return ModelSpec(roots=roots, parity="even", mu=mu, xi=xi, domain=(0, 1))
    if fam == "even-r2":
        add(_root_entry(g.a1, 1, [-m for m in g.mu]))
        add(_root_entry(g.a2, -1, list(g.nu)))
        for a_i, e, x in g.simple:
            add(_root_entry(a_i, e, [-2 * e * x]))
        return ModelSpec(roots=roots, parity="even", mu=mu, xi=xi, domain=(g.a1, g.a2))
    root, sign, flip, dom = {
        "odd-disk": (1, -1, 1, (0, 1)),
        "odd-plus": (-1, 1, -1, (0, None)),
        "odd-minus": (-1, 1, 1, (0, None)),
        "odd-exterior": (1, 1, -1, (1, None)),
    }[fam]
    add(_root_entry(root, sign, [flip * m for m in g.mu]))
    return ModelSpec(roots=roots, parity="odd", mu=mu, xi=xi, nu=1, domain=dom)


# ----------------------------------------------------------------------
# conformal profile


@dataclass(frozen=True)
class MuProfile:
    """mu(u) = const + sum coef * (alpha + beta u**2)**expo."""

    const: float
    terms: tuple = field(default_factory=tuple)

    def value(self, u: float) -> float:
        total = self.const
        for c, al, be, e in self.terms:
            base = al + be * u * u
            if base <= 0:
                raise DomainError(f"profile base {al} + {be} u^2 is not positive at u = {u}")
            total += c * base**e
        return total

    def derivative(self, u: float) -> float:
        total = 0.0
        for c, al, be, e in self.terms:
            base = al + be * u * u
            total += c * e * base ** (e - 1) * 2 * be * u
        return total

    __call__ = value


def mu_profile(g: GlobalExampleSpec) -> MuProfile:
    fam = g.family
    if fam == "even-h2":
        terms = [((l - 0.5) * float(m), 1.0, 1.0, l - 1) for l, m in enumerate(g.mu, start=1)]
        terms += [(float(x), 1.0, 1.0 - 1.0 / float(a_i), -1.5) for a_i, _, x in g.simple]
        return MuProfile(0.0, tuple(terms))
    if fam == "even-r2":
        a1, a2 = float(g.a1), float(g.a2)
        terms = [((2 * l - 1) * float(m), -a1, 1.0, -(l + 0.5)) for l, m in enumerate(g.mu, start=1)]
        terms += [((2 * l - 1) * float(v), a2, -1.0, -(l + 0.5)) for l, v in enumerate(g.nu, start=1)]
        terms += [(2 * float(x), -e * float(a_i), float(e), -1.5) for a_i, e, x in g.simple]
        return MuProfile(0.0, tuple(terms))
    sgn, al, be = {
        "odd-disk": (1, 1.0, -1.0),
        "odd-plus": (1, 1.0, 1.0),
        "odd-minus": (-1, 1.0, 1.0),
        "odd-exterior": (1, -1.0, 1.0),
    }[fam]
    terms = [(sgn * (2 * l - 1) * float(m), al, be, -(l + 0.5)) for l, m in enumerate(g.mu, start=1)]
    return MuProfile(1.0, tuple(terms))


def u_interval(g: GlobalExampleSpec) -> tuple[float, float]:
    return {
        "even-h2": (0.0, math.inf),
        "even-r2": (math.sqrt(g.a1), math.sqrt(g.a2)),
        "odd-disk": (0.0, 1.0),
        "odd-plus": (0.0, math.inf),
        "odd-minus": (0.0, math.inf),
        "odd-exterior": (1.0, math.inf),
    }[g.family]


def a_of_u(g: GlobalExampleSpec, u: float) -> float:
    if g.family == "even-h2":
        return u * u / (1 + u * u)
    return u * u


def u_of_a(g: GlobalExampleSpec, a: float) -> float:
    if g.family == "even-h2":
        return math.sqrt(a / (1 - a))
    return math.sqrt(a)


def curvature(profile, u: float) -> float:
    """R = -(mu + u mu') / mu**3 for the metric (mu**2 du**2 + dy**2) / u**2.

    ``profile`` is a MuProfile or a pair of callables (mu, mu').
    """
    if isinstance(profile, MuProfile):
        mu, dmu = profile.value(u), profile.derivative(u)
    else:
        mu, dmu = profile[0](u), profile[1](u)
    if mu == 0:
        raise ZeroDivisionError(f"mu vanishes at u = {u}: curvature singularity")
    return -(mu + u * dmu) / mu**3


def _check_u(g: GlobalExampleSpec, u: float) -> None:
    lo, hi = u_interval(g)
    if not (lo < u < hi):
        raise DomainError(f"u = {u} outside the interval ({lo}, {hi}) of family {g.family}")


def _r2_time(g: GlobalExampleSpec) -> RadicalElement:
    """t(a) = int x'(a)/sqrt(a) da for even-r2, from the closed partner antiderivatives."""
    pairs = [(g.a1, 1), (g.a2, -1)] + [(a_i, e) for a_i, e, _ in g.simple] + [(0, 1)]
    basis = RadicalBasis(pairs)
    h = len(pairs) - 1
    t = RadicalElement.zero(basis)
    for l, m in enumerate(g.mu, start=1):
        t = t + integral_simple_partner(basis, 0, h, l) * m
    for l, v in enumerate(g.nu, start=1):
        t = t + integral_simple_partner(basis, 1, h, l) * v
    for k, (_, _, x) in enumerate(g.simple, start=2):
        t = t + integral_simple_partner(basis, k, h, 1) * (2 * x)
    return t


_R2_CACHE: dict = {}


def omega_transform(g: GlobalExampleSpec, u: float) -> tuple[float, float]:
    """(Omega(u), t(u)) with t = u Omega(u) and dt/du = mu(u), from closed forms."""
    _check_u(g, u)
    fam = g.family
    if fam == "even-r2":
        key = (g.a1, g.a2, g.mu, g.nu, g.simple)
        if key not in _R2_CACHE:
            _R2_CACHE[key] = _r2_time(g)
        t = float(_R2_CACHE[key].eval_numeric(u * u, dps=30))
        return t / u, t
    if fam == "even-h2":
        w = 1 + u * u
        om = 0.0
        for l, m in enumerate(g.mu, start=1):
            om += float(m) / (2 * float(P(l))) * sum(float(P(s)) * w ** (s - 1) for s in range(1, l + 1))
        for a_i, _, x in g.simple:
            om += float(x) / math.sqrt(1 + (1 - 1 / float(a_i)) * u * u)
        return om, u * om
    base, sgn = {
        "odd-disk": (1 - u * u, 1),
        "odd-plus": (1 + u * u, 1),
        "odd-minus": (1 + u * u, -1),
        "odd-exterior": (u * u - 1, -1),
    }[fam]
    om = 1.0
    for l, m in enumerate(g.mu, start=1):
        inner = 0.0
        for s in range(1, l + 1):
            w = float(P(s)) / base ** (s - 0.5)
            inner += (-1) ** (l - s) * w if fam == "odd-exterior" else w
        om += sgn * float(m) / float(P(l)) * inner
    return om, u * om


# ----------------------------------------------------------------------
# classification


@dataclass
class ClassifyResult:
    family: str
    tag: str  # "H2", "R2" or "rejected"
    reason: str = ""
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.tag != "rejected"


def _samples(g: GlobalExampleSpec, count: int) -> np.ndarray:
    """Dense u samples, geometric towards each end, kept 1e-4 away from finite endpoints."""
    lo, hi = u_interval(g)
    if math.isinf(hi):
        return lo + np.geomspace(1e-4, 1e4, count)
    frac = np.geomspace(1e-4, 0.5, count // 2)
    frac = np.concatenate([frac, 1 - frac[::-1][1:]])
    return lo + (hi - lo) * frac


def classify_global(g: GlobalExampleSpec, samples: int = 400) -> ClassifyResult:
    """Apply the sufficient conditions; return the manifold tag or the first failed constraint."""
    bad = _violations(g)
    if bad:
        return ClassifyResult(g.family, "rejected", bad[0], {"parameters": False})
    checks = {"parameters": True}
    prof = mu_profile(g)
    us = _samples(g, samples)
    mus = np.array([prof.value(float(u)) for u in us])
    checks["mu positive"] = bool(np.all(mus > 0))
    ts = np.array([omega_transform(g, float(u))[1] for u in us])
    checks["t increasing"] = bool(np.all(np.diff(ts) > 0))
    if g.manifold == "H2":
        oms = np.array([omega_transform(g, float(u))[0] for u in us])
        checks["conformal factor nonvanishing"] = bool(np.all(oms > 0) and np.all(np.isfinite(oms)))
    if g.family == "odd-minus":
        bound = float(g.weighted_mu_sum())
        lhs = [
            sum(float(m) / float(P(l)) * sum(float(P(s)) / (1 + u * u) ** (s - 0.5) for s in range(1, l + 1))
                for l, m in enumerate(g.mu, start=1))
            for u in np.concatenate([[0.0], us])
        ]
        checks["weighted bound"] = bool(max(lhs) <= bound * (1 + 1e-12))
    for name, ok in checks.items():
        if not ok:
            return ClassifyResult(g.family, "rejected", f"{name} check failed", checks)
    return ClassifyResult(g.family, g.manifold, "", checks)
