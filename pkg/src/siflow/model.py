"""Profile function x(a), the coefficient families b_k, c_k, and assembled models."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .integrals import integral_general
from .phase import PhasePolynomial
from .radical import RadicalBasis, RadicalElement, RationalFunction
from .symmetric import (
    RootMultiset,
    SigmaTable,
    pochhammer,
    pochhammer_ratio,
    sigma,
    sigma_deflated,
)

__all__ = [
    "SpecError",
    "RootSpec",
    "ModelSpec",
    "CoefficientSet",
    "Model",
    "build_x",
    "apply_op_n",
    "op_n_rhs",
    "build_btilde",
    "b_from_btilde",
    "build_b",
    "verify_b_recurrence",
    "build_c",
    "build_coefficients",
    "assemble_model",
]

HALF = Fraction(1, 2)


class SpecError(ValueError):
    """Inconsistent model specification."""


@dataclass(frozen=True)
class RootSpec:
    value: Fraction
    multiplicity: int
    sign: int

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.multiplicity < 1:
            raise SpecError(f"multiplicity of root {self.value} must be >= 1")
        if self.sign not in (1, -1):
            raise SpecError(f"sign of root {self.value} must be +1 or -1")


@dataclass
class ModelSpec:
    """Roots of F with signs, the free parameters, parity and working interval.

    ``mu`` maps each multiple root to (mu_1, ..., mu_r); ``xi`` maps each simple
    root to its xi.  ``domain`` bounds may be ``None`` for an infinite end; when
    omitted the widest interval compatible with the signs is used.
    """

    roots: tuple[RootSpec, ...]
    parity: str = "even"
    mu: dict = field(default_factory=dict)
    xi: dict = field(default_factory=dict)
    nu: Fraction | None = None
    domain: tuple | None = None
    n: int | None = None

    def __post_init__(self):
        self.roots = tuple(r if isinstance(r, RootSpec) else RootSpec(*r) for r in self.roots)
        self.mu = {Fraction(k): tuple(Fraction(v) for v in vals) for k, vals in self.mu.items()}
        self.xi = {Fraction(k): Fraction(v) for k, v in self.xi.items()}
        if self.nu is not None:
            self.nu = Fraction(self.nu)
        self.validate()

    # ------------------------------------------------------------------
    def validate(self) -> None:
        if not self.roots:
            raise SpecError("F needs at least one root")
        values = [r.value for r in self.roots]
        if len(set(values)) != len(values):
            raise SpecError(f"duplicate roots: {values}")
        degree = sum(r.multiplicity for r in self.roots)
        if self.n is None:
            self.n = degree
        elif self.n != degree:
            raise SpecError(f"n = {self.n} but the multiplicities add up to {degree}")
        if self.parity not in ("even", "odd"):
            raise SpecError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.parity == "odd":
            if self.nu is None or self.nu == 0:
                raise SpecError("odd parity needs a nonzero nu")
        elif self.nu not in (None, 0):
            raise SpecError("nu is only meaningful for odd parity")
        for r in self.roots:
            if r.multiplicity >= 2:
                mus = self.mu.get(r.value)
                if mus is None or len(mus) != r.multiplicity:
                    raise SpecError(f"multiple root {r.value} needs exactly {r.multiplicity} mu parameters")
                if r.value in self.xi:
                    raise SpecError(f"xi given for multiple root {r.value}")
            else:
                if r.value not in self.xi:
                    raise SpecError(f"simple root {r.value} needs a xi parameter")
                if r.value in self.mu:
                    raise SpecError(f"mu given for simple root {r.value}")
        extra = (set(self.mu) | set(self.xi)) - set(values)
        if extra:
            raise SpecError(f"parameters given for unknown roots {sorted(extra)}")
        lo = max((r.value for r in self.roots if r.sign == 1), default=None)
        hi = min((r.value for r in self.roots if r.sign == -1), default=None)
        if lo is not None and hi is not None and lo >= hi:
            raise SpecError("signs leave no interval on which every Delta is positive")
        if self.domain is None:
            self.domain = (lo, hi)
        else:
            dlo, dhi = (None if v is None else Fraction(v) for v in self.domain)
            if dlo is not None and dhi is not None and dlo >= dhi:
                raise SpecError(f"empty domain interval ({dlo}, {dhi})")
            for r in self.roots:
                if r.sign == 1 and (dlo is None or dlo < r.value):
                    raise SpecError(f"domain reaches below root {r.value} where Delta (sign +1) is negative")
                if r.sign == -1 and (dhi is None or dhi > r.value):
                    raise SpecError(f"domain reaches above root {r.value} where Delta (sign -1) is negative")
            self.domain = (dlo, dhi)

    # ------------------------------------------------------------------
    @property
    def multiset(self) -> RootMultiset:
        return RootMultiset((r.value, r.multiplicity) for r in self.roots)

    @property
    def basis(self) -> RadicalBasis:
        return RadicalBasis((r.value, r.sign) for r in self.roots)

    @property
    def multiple_roots(self) -> list[RootSpec]:
        return [r for r in self.roots if r.multiplicity >= 2]

    @property
    def simple_roots(self) -> list[RootSpec]:
        return [r for r in self.roots if r.multiplicity == 1]

    @property
    def odd(self) -> bool:
        return self.parity == "odd"

    def F_coefficients(self) -> list[Fraction]:
        return self.multiset.coefficients()

    def F(self) -> RationalFunction:
        return RationalFunction.from_coeffs(self.F_coefficients())

    def label(self) -> str:
        parts = [f"{r.value}^{r.multiplicity}({'+' if r.sign > 0 else '-'})" for r in self.roots]
        return f"{self.parity} n={self.n} F=" + "*".join(parts)


@dataclass
class CoefficientSet:
    x: RadicalElement
    dx: RadicalElement
    b: list[RadicalElement]
    c: list[RadicalElement]
    btilde: list[RadicalElement]
    k_min: int

    def b_at(self, k: int) -> RadicalElement:
        return self.b[k - self.k_min]

    def c_at(self, k: int) -> RadicalElement:
        return self.c[k - self.k_min]


@dataclass
class Model:
    spec: ModelSpec
    coeffs: CoefficientSet
    H: PhasePolynomial
    G: PhasePolynomial
    Q1: PhasePolynomial
    Q2: PhasePolynomial
    S1: PhasePolynomial
    S2: PhasePolynomial
    metric_factor: RadicalElement

    @property
    def degree(self) -> int:
        return 2 * self.spec.n + (1 if self.spec.odd else 0)


# ----------------------------------------------------------------------
# x(a) and the ODE


def _dpow(basis: RadicalBasis, idx: int, twice: int) -> RadicalElement:
    return RadicalElement.delta_power(basis, idx, twice)


def build_x(spec: ModelSpec, *, ode_constant: bool = True) -> RadicalElement:
    """Profile function x(a).

    For odd parity the linear term nu a/2 alone leaves Op_n x - (n + 1/2) nu a
    equal to the constant nu A_{n-1}; with ``ode_constant`` the additive constant
    nu sigma_1 is included so the inhomogeneous ODE holds exactly.  Only x'
    enters the metric and the integrals, so both choices give the same model.
    """
    basis = spec.basis
    x = RadicalElement.zero(basis)
    for idx, r in enumerate(spec.roots):
        if r.multiplicity >= 2:
            for l, mu in enumerate(spec.mu[r.value], start=1):
                x = x + _dpow(basis, idx, -(2 * l - 1)) * mu
        else:
            x = x + _dpow(basis, idx, -1) * spec.xi[r.value]
    if spec.odd:
        x = x + RadicalElement.variable(basis) * (spec.nu / 2)
        if ode_constant:
            x = x + spec.nu * sigma(spec.multiset)[1]
    return x


def _F_derivatives(F: RationalFunction, upto: int) -> list[RationalFunction]:
    """F^{(j)}/j! for j = 0..upto."""
    out, cur = [], F
    for j in range(upto + 1):
        out.append(cur / factorial(j))
        cur = cur.diff()
    return out


def apply_op_n(spec: ModelSpec, x: RadicalElement) -> RadicalElement:
    """sum_{s=0}^n F^{(n-s)}/(n-s)! * D^s x / (1/2)_s."""
    n = spec.n
    Fd = _F_derivatives(spec.F(), n)
    total = RadicalElement.zero(x.basis)
    dx = x
    for s in range(n + 1):
        if s:
            dx = dx.diff()
        total = total + dx * (Fd[n - s] / pochhammer(HALF, s))
    return total


def op_n_rhs(spec: ModelSpec) -> RadicalElement:
    """Expected value of Op_n[F] x: zero, or (n + 1/2) nu a for odd parity."""
    basis = spec.basis
    if not spec.odd:
        return RadicalElement.zero(basis)
    return RadicalElement.variable(basis) * ((spec.n + HALF) * spec.nu)


# ----------------------------------------------------------------------
# b_k


def build_btilde(spec: ModelSpec, x: RadicalElement | None = None) -> list[RadicalElement]:
    """Intermediate coefficients of Q1 written in powers of Pi.

    Even parity returns [bt_1..bt_n]; odd parity returns [bt_0..bt_n] with bt_n = nu.
    """
    x = build_x(spec) if x is None else x
    n = spec.n
    Fd = _F_derivatives(spec.F(), n + 1)
    ders = [x]
    for _ in range(n + 1):
        ders.append(ders[-1].diff())
    out = []
    if spec.odd:
        for k in range(n):
            acc = RadicalElement.zero(x.basis)
            for s in range(1, k + 2):
                acc = acc + ders[s] * (Fd[k + 1 - s] / pochhammer(HALF, s))
            out.append(acc)
        out.append(RadicalElement.constant(x.basis, spec.nu))
    else:
        for k in range(1, n + 1):
            acc = RadicalElement.zero(x.basis)
            for s in range(1, k + 1):
                acc = acc + ders[s] * (Fd[k - s] / pochhammer(HALF, s))
            out.append(acc)
    return out


def b_from_btilde(spec: ModelSpec, btilde: Sequence[RadicalElement]) -> list[RadicalElement]:
    """Re-expand Q1 in powers of H via Pi**2 = H - a P_y**2."""
    n = spec.n
    basis = btilde[0].basis
    minus_a = RationalFunction.from_coeffs([0, -1])
    out = []
    if spec.odd:
        for k in range(n + 1):
            acc = RadicalElement.zero(basis)
            for s in range(k + 1):
                acc = acc + btilde[n - s] * (minus_a ** (k - s) * comb(n - s, k - s))
            out.append(acc)
    else:
        for k in range(1, n + 1):
            acc = RadicalElement.zero(basis)
            for s in range(1, k + 1):
                acc = acc + btilde[n - s] * (minus_a ** (k - s) * comb(n - s, k - s))
            out.append(acc)
    return out


def _mu_part_b(basis, idx, eps, mus, sig_defl: list[SigmaTable], k: int) -> RadicalElement:
    """sum_l (mu_l/P_l) sum_s (-eps)^(s-1) sigma^(alpha,s)_{k-s} P_{l-s+1} Delta^-(l-s+1/2)."""
    acc = RadicalElement.zero(basis)
    for l, mu in enumerate(mus, start=1):
        if not mu:
            continue
        inner = RadicalElement.zero(basis)
        for s in range(1, l + 1):
            sg = sig_defl[s][k - s]
            if not sg:
                continue
            inner = inner + _dpow(basis, idx, -(2 * (l - s) + 1)) * (
                (-eps) ** (s - 1) * sg * pochhammer_ratio(l - s + 1)
            )
        acc = acc + inner * (mu / pochhammer_ratio(l))
    return acc


class _Tables:
    """Symmetric-function tables of one spec, computed once."""

    def __init__(self, spec: ModelSpec):
        F = spec.multiset
        self.F = F
        self.sigma = sigma(F)
        self.defl: dict[Fraction, list[SigmaTable]] = {}
        for r in spec.roots:
            self.defl[r.value] = [sigma_deflated(F, r.value, s) for s in range(r.multiplicity + 1)]
        self.simple = {r.value: sigma_deflated(F, i=r.value) for r in spec.simple_roots}
        self.pair = {}
        simple = [r.value for r in spec.simple_roots]
        for i in simple:
            for j in simple:
                if i != j:
                    self.pair[(i, j)] = sigma_deflated(F, i=[i, j])
        self.mult_simple = {}
        for r in spec.multiple_roots:
            for i in simple:
                for s in range(0, r.multiplicity + 1):
                    self.mult_simple[(r.value, s, i)] = sigma_deflated(F, r.value, s, i)


def _b_even_part(spec: ModelSpec, tabs: _Tables, k: int) -> RadicalElement:
    basis = spec.basis
    acc = RadicalElement.zero(basis)
    for idx, r in enumerate(spec.roots):
        if r.multiplicity >= 2:
            acc = acc + _mu_part_b(basis, idx, r.sign, spec.mu[r.value], tabs.defl[r.value], k)
        else:
            sg = tabs.simple[r.value][k - 1]
            if sg:
                acc = acc + _dpow(basis, idx, -1) * (spec.xi[r.value] * sg)
    return acc * (-1) ** k


def build_b(spec: ModelSpec, tabs: _Tables | None = None) -> list[RadicalElement]:
    """Closed-form b_k: k = 1..n (even) or k = 0..n (odd)."""
    tabs = _Tables(spec) if tabs is None else tabs
    if not spec.odd:
        return [_b_even_part(spec, tabs, k) for k in range(1, spec.n + 1)]
    out = []
    for k in range(spec.n + 1):
        b = _b_even_part(spec, tabs, k) + RadicalElement.constant(spec.basis, (-1) ** k * spec.nu * tabs.sigma[k])
        out.append(b)
    return out


def verify_b_recurrence(coeffs: CoefficientSet, spec: ModelSpec) -> list[tuple[str, RadicalElement]]:
    """Residuals of the first-order system linking consecutive b_k (all must be zero).

    Even: b_1 = -x, b'_{k+1} = a b'_k + b_k/2 + (-1)^{k+1} sigma_k x' (1 <= k < n),
    0 = a b'_n + b_n/2 + (-1)^{n+1} sigma_n x'.  Odd parity carries b_0 = nu,
    b_1 = -x + nu a/2 (x including its ODE constant), and the same derivative
    relations from k = 0.
    """
    n = spec.n
    sig = sigma(spec.multiset)
    basis = coeffs.x.basis
    a = RadicalElement.variable(basis)
    dx = coeffs.dx
    b = {k: coeffs.b_at(k) for k in range(coeffs.k_min, n + 1)}
    db = {k: v.diff() for k, v in b.items()}
    out: list[tuple[str, RadicalElement]] = []
    if spec.odd:
        out.append(("b_0 = nu", b[0] - spec.nu))
        out.append(("b_1 = -x + nu a/2", b[1] + coeffs.x - a * (HALF * spec.nu)))
        start = 0
    else:
        out.append(("b_1 = -x", b[1] + coeffs.x))
        start = 1
    for k in range(start, n):
        res = db[k + 1] - (a * db[k] + b[k] * HALF + dx * ((-1) ** (k + 1) * sig[k]))
        out.append((f"b'_{k + 1} relation (k={k})", res))
    res = a * db[n] + b[n] * HALF + dx * ((-1) ** (n + 1) * sig[n])
    out.append((f"terminal relation (k={n})", res))
    return out


# ----------------------------------------------------------------------
# c_k


def _c_mumu_same(basis, idx, eps, mus, defl, k) -> RadicalElement:
    """Same-root part: 2 sum_{l,m} (mu_l mu_m / P_l)(m-1/2) sum_{s<=l} (-eps)^(s-1) sigma P_{l-s+1} / ((l+m-s) Delta^(l+m-s))."""
    acc = RadicalElement.zero(basis)
    r = len(mus)
    for l in range(1, r + 1):
        for m in range(1, r + 1):
            w = mus[l - 1] * mus[m - 1]
            if not w:
                continue
            w = 2 * w * (m - HALF) / pochhammer_ratio(l)
            for s in range(1, l + 1):
                sg = defl[s][k - s]
                if not sg:
                    continue
                N = l + m - s
                coef = w * (-eps) ** (s - 1) * sg * pochhammer_ratio(l - s + 1) / N
                acc = acc + _dpow(basis, idx, -2 * N) * coef
    return acc


def _c_mumu_cross(basis, ia, ea, mus_a, ib, eb, mus_b, defl_b, k) -> RadicalElement:
    """Cross term b^(beta) x'^(alpha): 2 sum (mu_a,l mu_b,m / P_m) sum_{s<=m} (-e_b)^(s-1) sigma^(b,s) P_{m-s+1} (-e_a) I[l, m-s]."""
    acc = RadicalElement.zero(basis)
    for l, mua in enumerate(mus_a, start=1):
        if not mua:
            continue
        for m, mub in enumerate(mus_b, start=1):
            if not mub:
                continue
            w = 2 * mua * mub / pochhammer_ratio(m) * (-ea)
            for s in range(1, m + 1):
                sg = defl_b[s][k - s]
                if not sg:
                    continue
                coef = w * (-eb) ** (s - 1) * sg * pochhammer_ratio(m - s + 1)
                acc = acc + integral_general(basis, ia, ib, l, m - s) * coef
    return acc


def _c_muxi(spec, tabs, basis, idx, r, k) -> RadicalElement:
    acc = RadicalElement.zero(basis)
    a = RationalFunction.variable()
    for l, mu in enumerate(spec.mu[r.value], start=1):
        if not mu:
            continue
        for jdx, q in enumerate(spec.roots):
            if q.multiplicity != 1:
                continue
            xi = spec.xi[q.value]
            if not xi:
                continue
            inner = RadicalElement.zero(basis)
            for s in range(1, l + 1):
                t = tabs.mult_simple[(r.value, s, q.value)]
                poly = a * t[k - s - 1] + t[k - s]
                if poly.is_zero():
                    continue
                inner = inner + _dpow(basis, idx, -(2 * (l - s) + 1)) * (
                    poly * ((-r.sign) ** (s - 1) * pochhammer_ratio(l - s + 1))
                )
            acc = acc + inner * _dpow(basis, jdx, -1) * (mu * xi / pochhammer_ratio(l))
    return acc


def _c_xixi(spec, tabs, basis, k) -> RadicalElement:
    acc = RadicalElement.zero(basis)
    a = RationalFunction.variable()
    simple = [(i, q) for i, q in enumerate(spec.roots) if q.multiplicity == 1]
    for i, qi in simple:
        xi_i = spec.xi[qi.value]
        sg = tabs.simple[qi.value][k - 1]
        if xi_i and sg:
            acc = acc + _dpow(basis, i, -2) * (xi_i**2 * sg)
        for j, qj in simple:
            if i == j:
                continue
            w = xi_i * spec.xi[qj.value]
            if not w:
                continue
            t = tabs.pair[(qi.value, qj.value)]
            poly = a * t[k - 2] + t[k - 1]
            if poly.is_zero():
                continue
            acc = acc + _dpow(basis, i, -1) * _dpow(basis, j, -1) * (poly * w)
    return acc


def _c_even_part(spec: ModelSpec, tabs: _Tables, k: int) -> RadicalElement:
    basis = spec.basis
    total = RadicalElement.zero(basis)
    mult = [(i, r) for i, r in enumerate(spec.roots) if r.multiplicity >= 2]
    for i, r in mult:
        total = total + _c_mumu_same(basis, i, r.sign, spec.mu[r.value], tabs.defl[r.value], k)
        for j, q in mult:
            if j != i:
                total = total + _c_mumu_cross(
                    basis, i, r.sign, spec.mu[r.value], j, q.sign, spec.mu[q.value], tabs.defl[q.value], k
                )
        total = total + _c_muxi(spec, tabs, basis, i, r, k) * 2
    total = total + _c_xixi(spec, tabs, basis, k)
    return total * (Fraction((-1) ** (k + 1), 2))


def _c_odd_extra(spec: ModelSpec, tabs: _Tables, k: int) -> RadicalElement:
    basis = spec.basis
    nu = spec.nu
    a = RationalFunction.variable()
    sig = tabs.sigma
    total = RadicalElement.from_rational_function(basis, a * (nu**2 * sig[k]))
    for i, q in enumerate(spec.roots):
        if q.multiplicity != 1:
            continue
        t = tabs.simple[q.value]
        poly = a * t[k - 1] + t[k]
        if not poly.is_zero():
            total = total + _dpow(basis, i, -1) * (poly * (2 * nu * spec.xi[q.value]))
    for i, r in enumerate(spec.roots):
        if r.multiplicity < 2:
            continue
        defl = tabs.defl[r.value]
        for l, mu in enumerate(spec.mu[r.value], start=1):
            if not mu:
                continue
            P_l = pochhammer_ratio(l)
            inner = _dpow(basis, i, -(2 * l - 1)) * (sig[k] * P_l)
            for s in range(1, l + 1):
                sg = defl[s][k - s]
                if not sg:
                    continue
                coef = (-r.sign) ** s * sg * pochhammer_ratio(l - s + 1) / (2 * l - 2 * s - 1)
                inner = inner + _dpow(basis, i, -(2 * (l - s) - 1)) * coef
            total = total + inner * (2 * nu * mu / P_l)
    return total * Fraction((-1) ** (k + 1), 2)


def build_c(spec: ModelSpec, tabs: _Tables | None = None) -> list[RadicalElement]:
    """Closed-form c_k with c_k' = -b_k x': k = 1..n (even) or 0..n (odd)."""
    tabs = _Tables(spec) if tabs is None else tabs
    if not spec.odd:
        return [_c_even_part(spec, tabs, k) for k in range(1, spec.n + 1)]
    return [_c_even_part(spec, tabs, k) + _c_odd_extra(spec, tabs, k) for k in range(spec.n + 1)]


def build_coefficients(spec: ModelSpec) -> CoefficientSet:
    tabs = _Tables(spec)
    x = build_x(spec)
    return CoefficientSet(
        x=x,
        dx=x.diff(),
        b=build_b(spec, tabs),
        c=build_c(spec, tabs),
        btilde=build_btilde(spec, x),
        k_min=0 if spec.odd else 1,
    )


# ----------------------------------------------------------------------
# assembly


def assemble_model(spec: ModelSpec, coeffs: CoefficientSet | None = None) -> Model:
    coeffs = build_coefficients(spec) if coeffs is None else coeffs
    basis = spec.basis
    n = spec.n
    one = RadicalElement.constant(basis, 1)
    a = RadicalElement.variable(basis)
    H = PhasePolynomial({(0, 2, 0): one, (0, 0, 2): a})
    Hp = [PhasePolynomial({(0, 0, 0): one})]
    for _ in range(n):
        Hp.append(Hp[-1] * H)
    A = spec.F_coefficients()
    extra = 1 if spec.odd else 0

    def mono(coef, p, q):
        return PhasePolynomial({(0, p, q): coef})

    G = PhasePolynomial.zero()
    for k in range(n + 1):
        if A[k]:
            G = G + Hp[k] * mono(RadicalElement.constant(basis, A[k]), 0, 2 * (n - k) + extra)
    Q1 = PhasePolynomial.zero()
    Q2 = PhasePolynomial.zero()
    for k in range(coeffs.k_min, n + 1):
        Q1 = Q1 + Hp[n - k] * mono(coeffs.b_at(k), 1, 2 * k - 1 + extra)
        Q2 = Q2 + Hp[n - k] * mono(coeffs.c_at(k), 0, 2 * k + extra)
    y = PhasePolynomial({(1, 0, 0): one})
    S1 = Q1 + y * G
    S2 = Q2 + y * Q1 + (y * y) * G * HALF
    degree = 2 * n + extra
    for name, P in (("G", G), ("Q1", Q1), ("Q2", Q2), ("S1", S1), ("S2", S2)):
        degs = P.momentum_degrees()
        if degs - {degree}:
            raise AssertionError(f"{name} is not homogeneous of momentum degree {degree}: {sorted(degs)}")
    return Model(
        spec=spec,
        coeffs=coeffs,
        H=H,
        G=G,
        Q1=Q1,
        Q2=Q2,
        S1=S1,
        S2=S2,
        metric_factor=coeffs.dx * RationalFunction.from_coeffs([0, 1]).reciprocal(),
    )
