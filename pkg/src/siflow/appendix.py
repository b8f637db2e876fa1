"""Exact checks of the auxiliary identities and of the quartic (n = 2) reduction.

Every antiderivative is checked by differentiating it inside the radical
algebra; nothing here integrates symbolically.  The u-integrals are moved to
v = u**2, where sqrt(v) is a radical with root 0 and d/du = 2 sqrt(v) d/dv.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .integrals import hyp2f1_terms, integral_general, integral_simple_partner
from .radical import RadicalBasis, RadicalElement, RationalFunction
from .symmetric import RootMultiset, pochhammer, pochhammer_ratio, sigma_deflated

__all__ = [
    "IdentityCase",
    "IdentityTally",
    "SuiteReport",
    "operator_sum_sides",
    "check_operator_sum",
    "check_deflation_identities",
    "deflate_mixed_dropping_simple_root",
    "check_antiderivative",
    "hypergeometric_denominator_scan",
    "random_cases",
    "run_suite",
    "NovichkovParams",
    "NovichkovResult",
    "novichkov_residuals",
    "random_novichkov_params",
]

HALF = Fraction(1, 2)
P = pochhammer_ratio


# ----------------------------------------------------------------------
# suite A: the operator sum applied to one power of Delta


def operator_sum_sides(F: RationalFunction, root, sign: int, p: int, k: int, l: int):
    """Both sides of the closed form of sum_{s=p}^k F^(k-s)/(k-s)! D^s x_l / (1/2)_s."""
    if not (0 <= p <= k and l >= 1):
        raise ValueError("need 0 <= p <= k and l >= 1")
    basis = RadicalBasis([(root, sign)])
    x = RadicalElement.delta_power(basis, 0, -(2 * l - 1))
    Fd = [F]
    for _ in range(k):
        Fd.append(Fd[-1].diff())
    lhs = RadicalElement.zero(basis)
    dx = x.diff_n(p)
    for s in range(p, k + 1):
        lhs = lhs + dx * Fd[k - s] * (Fraction(1, factorial(k - s)) / pochhammer(HALF, s))
        dx = dx.diff()
    rhs = RadicalElement.zero(basis)
    for s in range(1, l + 1):
        g = RadicalElement.from_rational_function(basis, F) * RadicalElement.delta_power(basis, 0, -2 * s)
        g = g.diff_n(k - p) * Fraction(1, factorial(k - p))
        w = pochhammer(Fraction(p) - HALF, l - s) / factorial(l - s)
        rhs = rhs + RadicalElement.delta_power(basis, 0, 2 * (s - l - p) + 1) * g * w
    rhs = rhs * (Fraction((-sign) ** p) / P(l))
    return lhs, rhs


def check_operator_sum(F, p: int, k: int, l: int, *, root=None, sign: int = 1) -> bool:
    """``F`` is a RootMultiset (root defaults to its first entry) or a RationalFunction."""
    if isinstance(F, RootMultiset):
        if root is None:
            root = F.entries[0][0]
        F = RationalFunction.from_coeffs(F.coefficients())
    elif root is None:
        raise ValueError("root is required when F is given as a polynomial")
    lhs, rhs = operator_sum_sides(F, root, sign, p, k, l)
    return (lhs - rhs).is_zero()


# ----------------------------------------------------------------------
# suite B: symmetric-function deflation identities


def _split(F: RootMultiset, root=None):
    if root is None:
        root = next((r for r, m in F.entries if m >= 2), None)
        if root is None:
            raise ValueError("F needs a multiple root")
    root = Fraction(root)
    r = F.multiplicity(root)
    if r < 2:
        raise ValueError(f"{root} is not a multiple root of F")
    simple = [x for x, m in F.entries if m == 1]
    return root, r, simple


def check_deflation_identities(F: RootMultiset, root=None) -> dict[str, bool]:
    """Every index combination of the four deflation identities; one flag per identity."""
    a1, r, simple = _split(F, root)
    n = F.degree
    sd = {s: sigma_deflated(F, a1, s) for s in range(r + 1)}
    sdi = {(s, i): sigma_deflated(F, a1, s, i) for s in range(r + 1) for i in simple}
    out = {"deflate-multiple": True, "deflate-simple": True, "deflate-mixed": True, "geometric-deflation": True}
    for s in range(1, r + 1):
        for k in range(n + s):
            if sd[s][k - s + 1] + a1 * sd[s][k - s] != sd[s - 1][k - s + 1]:
                out["deflate-multiple"] = False
    for i in simple:
        for s in range(r + 1):
            for k in range(n + s + 1):
                if sd[s][k - s] != sdi[(s, i)][k - s] + i * sdi[(s, i)][k - s - 1]:
                    out["deflate-simple"] = False
        for s in range(1, r + 1):
            for k in range(n + s + 1):
                if sdi[(s - 1, i)][k - s + 1] != sdi[(s, i)][k - s + 1] + a1 * sdi[(s, i)][k - s]:
                    out["deflate-mixed"] = False
        si = sdi[(0, i)]
        for L in range(1, r + 1):
            for k in range(n + 2):
                lam = si[k - 1] - sum((a1 - i) ** s * sd[s + 1][k - s - 1] for s in range(L))
                if lam != (a1 - i) ** L * sdi[(L, i)][k - L - 1]:
                    out["geometric-deflation"] = False
    if not simple:
        out.pop("deflate-simple")
        out.pop("deflate-mixed")
        out.pop("geometric-deflation")
    return out


def deflate_mixed_dropping_simple_root(F: RootMultiset, root=None) -> bool:
    """The mixed identity with sigma^(s-1) in place of sigma^(s-1),i on the left; false in general."""
    a1, r, simple = _split(F, root)
    n = F.degree
    for i in simple:
        for s in range(1, r + 1):
            lhs = sigma_deflated(F, a1, s - 1)
            rhs = sigma_deflated(F, a1, s, i)
            for k in range(n + s + 1):
                if lhs[k - s + 1] != rhs[k - s + 1] + a1 * rhs[k - s]:
                    return False
    return True


# ----------------------------------------------------------------------
# suite C: antiderivatives and the Pochhammer-ratio identity


@dataclass(frozen=True)
class IdentityCase:
    """One parameter point of an antiderivative or Pochhammer identity.

    ``tag`` is u-integral, pochhammer-sum, partner, hypergeometric or
    hypergeometric-reduces.  u-integral uses ``variant`` (one-plus-u2,
    u2-plus-eps, one-minus-u2) and ``eps``; the others use ``roots``/``signs``
    for (alpha, beta) plus ``l`` and ``M``.
    """

    tag: str
    n: int = 0
    k: int = 0
    l: int = 1
    p: int = 0
    s: int = 0
    M: int = 0
    roots: tuple = ()
    signs: tuple = ()
    variant: str = ""
    eps: int = 1

    def describe(self) -> str:
        bits = [self.tag]
        for name in ("variant", "n", "k", "l", "p", "M", "eps"):
            v = getattr(self, name)
            if v not in ("", 0) or name == "l":
                bits.append(f"{name}={v}")
        if self.roots:
            bits.append("roots=" + ",".join(str(r) for r in self.roots))
            bits.append("signs=" + ",".join(str(s) for s in self.signs))
        return " ".join(bits)


def _u_integral(variant: str, l: int, eps: int):
    """(integrand, antiderivative) as functions of v = u**2; radical 0 is sqrt(v)."""
    if variant == "one-plus-u2":
        basis = RadicalBasis([(0, 1)])
        one_plus_v = RadicalElement.from_rational_function(basis, RationalFunction.from_coeffs([1, 1]))
        integrand = one_plus_v ** (l - 1) * (2 * l - 1)
        rhs = RadicalElement.zero(basis)
        for s in range(1, l + 1):
            rhs = rhs + one_plus_v ** (s - 1) * P(s)
        rhs = RadicalElement.radical(basis, 0) * rhs * (1 / P(l))
        return basis, integrand, rhs
    if variant == "u2-plus-eps":
        # u**2 + eps = Delta of root -eps with sign +1
        basis = RadicalBasis([(0, 1), (-eps, 1)])
        integrand = RadicalElement.delta_power(basis, 1, -(2 * l + 1)) * (2 * l - 1)
        rhs = RadicalElement.zero(basis)
        for s in range(1, l + 1):
            rhs = rhs + RadicalElement.delta_power(basis, 1, -(2 * s - 1)) * (Fraction(eps) ** (l - s) * P(s))
        rhs = RadicalElement.radical(basis, 0) * rhs * (Fraction(eps) / P(l))
        return basis, integrand, rhs
    if variant == "one-minus-u2":
        basis = RadicalBasis([(0, 1), (1, -1)])
        integrand = RadicalElement.delta_power(basis, 1, -(2 * l + 1)) * (2 * l - 1)
        rhs = RadicalElement.zero(basis)
        for s in range(1, l + 1):
            rhs = rhs + RadicalElement.delta_power(basis, 1, -(2 * s - 1)) * P(s)
        rhs = RadicalElement.radical(basis, 0) * rhs * (1 / P(l))
        return basis, integrand, rhs
    raise ValueError(f"unknown u-integral {variant!r}")


def _d_du(f: RadicalElement) -> RadicalElement:
    return RadicalElement.radical(f.basis, 0) * f.diff() * 2


def _pair_basis(case: IdentityCase) -> RadicalBasis:
    if len(case.roots) != 2 or case.roots[0] == case.roots[1]:
        raise ValueError("antiderivative needs two distinct roots (eta~ = 0 otherwise)")
    return RadicalBasis(zip(case.roots, case.signs))


def check_antiderivative(case: IdentityCase) -> bool:
    if case.tag == "pochhammer-sum":
        l, k = case.l, case.k
        if not 0 <= k <= l - 1:
            raise ValueError("pochhammer-sum needs 0 <= k <= l - 1")
        lhs = sum(comb(s - 1, k) * P(s) for s in range(k + 1, l + 1)) / P(l)
        return lhs == Fraction(2 * l - 1, 2 * k + 1) * comb(l - 1, k)
    if case.tag == "u-integral":
        _, integrand, rhs = _u_integral(case.variant, case.l, case.eps)
        return (_d_du(rhs) - integrand).is_zero()
    if case.tag in ("partner", "hypergeometric", "hypergeometric-reduces"):
        basis = _pair_basis(case)
        l = case.l
        M = 0 if case.tag == "partner" else case.M
        integrand = (
            RadicalElement.delta_power(basis, 0, -(2 * l + 1))
            * RadicalElement.delta_power(basis, 1, -(2 * M + 1))
            * (l - HALF)
        )
        if case.tag == "partner":
            I = integral_simple_partner(basis, 0, 1, l)
        elif case.tag == "hypergeometric":
            I = integral_general(basis, 0, 1, l, M)
        else:
            return (integral_general(basis, 0, 1, l, 0) - integral_simple_partner(basis, 0, 1, l)).is_zero()
        return (I.diff() - integrand).is_zero()
    raise ValueError(f"check_antiderivative does not handle tag {case.tag!r}")


def hypergeometric_denominator_scan(lmax: int, Mmax: int) -> list[tuple[int, int, int]]:
    """(l, M, j) for which the terminating series meets (3/2 - l)_j = 0; expected empty."""
    bad = []
    for l in range(1, lmax + 1):
        for M in range(Mmax + 1):
            c = Fraction(3, 2) - l
            for j in range(l + M):
                if pochhammer(c, j) == 0:
                    bad.append((l, M, j))
                    break
            else:
                hyp2f1_terms(Fraction(1), -(l + M - 1), c)
    return bad


# ----------------------------------------------------------------------
# randomized suites


def _rq(rng: random.Random, lo: int = -5, hi: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def _distinct(rng: random.Random, count: int, **kw) -> list[Fraction]:
    out: list[Fraction] = []
    while len(out) < count:
        v = _rq(rng, **kw)
        if v not in out:
            out.append(v)
    return out


def _random_multiset(rng: random.Random, nmax: int = 5, need_multiple: bool = False, need_simple: bool = False):
    while True:
        n = rng.randint(1, nmax)
        r = rng.randint(2 if need_multiple else 1, n) if (n >= 2 or not need_multiple) else 0
        if r == 0:
            continue
        mults = [r]
        rest = n - r
        while rest:
            m = rng.randint(1, rest)
            mults.append(m)
            rest -= m
        if need_simple and 1 not in mults[1:]:
            if n - r == 0:
                continue
            mults = [r] + [1] * (n - r)
        roots = _distinct(rng, len(mults))
        return RootMultiset(zip(roots, mults))


def random_cases(tag: str, count: int, rng: random.Random) -> list:
    """``count`` admissible random parameter points for one identity family."""
    out: list = []
    for _ in range(count):
        if tag == "A":
            F = _random_multiset(rng)
            k = rng.randint(0, 5)
            out.append(
                (F, rng.randint(0, k), k, rng.randint(1, 4), _rq(rng), rng.choice((1, -1)))
            )
        elif tag == "B":
            out.append(_random_multiset(rng, need_multiple=True, need_simple=rng.random() < 0.8))
        elif tag == "u-integral":
            out.append(IdentityCase("u-integral", l=rng.randint(1, 4), variant=rng.choice(("one-plus-u2", "u2-plus-eps", "one-minus-u2")), eps=rng.choice((1, -1))))
        elif tag in ("partner", "hypergeometric", "hypergeometric-reduces"):
            out.append(
                IdentityCase(
                    tag,
                    l=rng.randint(1, 4),
                    M=rng.randint(0, 4) if tag == "hypergeometric" else 0,
                    roots=tuple(_distinct(rng, 2)),
                    signs=(rng.choice((1, -1)), rng.choice((1, -1))),
                )
            )
        elif tag == "pochhammer-sum":
            l = rng.randint(1, 12)
            out.append(IdentityCase("pochhammer-sum", l=l, k=rng.randint(0, l - 1)))
        else:
            raise ValueError(f"unknown case family {tag!r}")
    return out


@dataclass
class IdentityTally:
    name: str
    cases: int = 0
    passed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cases > 0 and self.passed == self.cases

    def record(self, ok: bool, what: str) -> None:
        self.cases += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 5:
            self.failures.append(what)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    tallies: list[IdentityTally]

    @property
    def ok(self) -> bool:
        return all(t.ok for t in self.tallies)


SUITES = ("A", "B", "C")


def run_suite(suite: str, cases: int = 100, seed: int = 0) -> SuiteReport:
    """Run ``cases`` random points of every identity in ``suite``.

    Suites: A operator sums, B deflation identities, C antiderivatives and the
    Pochhammer-ratio sum; ``all`` runs the three.
    """
    names = SUITES if suite == "all" else (suite,)
    if any(s not in SUITES for s in names):
        raise ValueError(f"unknown suite {suite!r}; expected one of A, B, C, all")
    rng = random.Random(seed)
    tallies: list[IdentityTally] = []
    for name in names:
        if name == "A":
            t = IdentityTally("operator-sum")
            for F, p, k, l, root, sign in random_cases("A", cases, rng):
                poly = RationalFunction.from_coeffs(F.coefficients())
                t.record(check_operator_sum(poly, p, k, l, root=root, sign=sign), f"p={p} k={k} l={l} root={root}")
            tallies.append(t)
        elif name == "B":
            ts = {key: IdentityTally(key) for key in ("deflate-multiple", "deflate-simple", "deflate-mixed", "geometric-deflation")}
            while min(t.cases for t in ts.values()) < cases:
                F = random_cases("B", 1, rng)[0]
                for key, ok in check_deflation_identities(F).items():
                    ts[key].record(ok, str(F.entries))
            tallies.extend(ts.values())
        else:
            for tag in ("u-integral", "pochhammer-sum", "partner", "hypergeometric", "hypergeometric-reduces"):
                t = IdentityTally(tag)
                for case in random_cases(tag, cases, rng):
                    t.record(check_antiderivative(case), case.describe())
                tallies.append(t)
    return SuiteReport(suite, seed, tallies)


# ----------------------------------------------------------------------
# quartic reduction


@dataclass(frozen=True)
class NovichkovParams:
    """``branch`` is "distinct" (a_1 != a_2, xi_1, xi_2) or "multiple" (a_1 = a_2, mu_1, mu_2)."""

    a1: Fraction
    a2: Fraction
    p1: Fraction
    p2: Fraction
    branch: str = "distinct"

    def __post_init__(self):
        for name in ("a1", "a2", "p1", "p2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a1 == 0 or self.a2 == 0:
            raise ValueError("need a_1 a_2 != 0 (B_4 = -a_1 a_2 must not vanish)")
        if self.branch == "distinct" and self.a1 == self.a2:
            raise ValueError("a_1 = a_2: use the multiple-root branch")
        if self.branch == "multiple" and self.a1 != self.a2:
            raise ValueError("multiple-root branch needs a_1 = a_2")
        if self.branch not in ("distinct", "multiple"):
            raise ValueError(f"unknown branch {self.branch!r}")

    @property
    def A0(self) -> Fraction:
        return self.a1 * self.a2

    @property
    def A1(self) -> Fraction:
        return -(self.a1 + self.a2)

    @property
    def B2(self) -> Fraction:
        return self.A1

    @property
    def B4(self) -> Fraction:
        return -self.A0

    def closed_B5(self) -> Fraction:
        a1, a2, p1, p2 = self.a1, self.a2, self.p1, self.p2
        if self.branch == "distinct":
            return (a1 - a2) / (a1 * a2) * (a1**2 * p2**2 - a2**2 * p1**2)
        return 4 * p2 / a1 * (2 * p2 - a1 * p1)

    def closed_B6(self) -> Fraction:
        a1, a2, p1, p2 = self.a1, self.a2, self.p1, self.p2
        if self.branch == "distinct":
            return -(a1 - a2) / (a1 * a2) * (a1 * p2**2 - a2 * p1**2)
        return -4 * p2 / a1**2 * (p2 - a1 * p1)


@dataclass
class NovichkovResult:
    residual_first_form: RadicalElement
    residual_second_form: RadicalElement
    B5: Fraction
    B6: Fraction
    residual_T: RadicalElement
    residual_t: RadicalElement
    B3_drift: RadicalElement

    @property
    def ok(self) -> bool:
        return all(
            r.is_zero() for r in (self.residual_first_form, self.residual_second_form, self.residual_T, self.residual_t, self.B3_drift)
        )


def novichkov_residuals(params: NovichkovParams) -> NovichkovResult:
    """Substitute the parametric solution into both quadratic forms.

    The basis carries sqrt(a - a_1), sqrt(a - a_2) (distinct branch only) and
    h_t = sqrt(a).  t(a) is built independently from the closed antiderivative
    of x'/sqrt(a), and B_3 = T h_t - B_4 t must come out constant.
    """
    a1, a2, p1, p2 = params.a1, params.a2, params.p1, params.p2
    if params.branch == "distinct":
        basis = RadicalBasis([(a1, 1), (a2, 1), (0, 1)])
        h = 2
        d1 = RadicalElement.delta_power(basis, 0, -1)
        d2 = RadicalElement.delta_power(basis, 1, -1)
        x = d1 * p1 + d2 * p2
        T = -(d1 * (a2 * p1) + d2 * (a1 * p2))
        F = RationalFunction.linear(1, a1) * RationalFunction.linear(1, a2)
        # x' / sqrt(a) = -(1/2) sum xi_i Delta_i^{-3/2} Delta_0^{-1/2}
        t = -(integral_simple_partner(basis, 0, h, 1) * p1 + integral_simple_partner(basis, 1, h, 1) * p2)
    else:
        basis = RadicalBasis([(a1, 1), (0, 1)])
        h = 1
        x = RadicalElement.delta_power(basis, 0, -1) * p1 + RadicalElement.delta_power(basis, 0, -3) * p2
        T = RadicalElement.delta_power(basis, 0, -1) * (2 * p2 - a1 * p1) - RadicalElement.delta_power(basis, 0, -3) * (a1 * p2)
        F = RationalFunction.linear(1, a1) ** 2
        t = -(integral_simple_partner(basis, 0, h, 1) * p1 + integral_simple_partner(basis, 0, h, 2) * p2)
    a = RadicalElement.variable(basis)
    ht = RadicalElement.radical(basis, h)
    dx = x.diff()
    B2, B4 = params.B2, params.B4
    B5, B6 = params.closed_B5(), params.closed_B6()
    ht2 = ht * ht
    n1 = ht2 * x * T * 2 - x * x * B4 + T * T * (ht2 * (B2 / B4) - 1) - B5
    n2 = (ht2 + B2) * x * x + ht2 * T * T * (1 / B4) - x * T * 2 - B6
    res_T = T + (a * x + dx * F * 2)
    res_t = t.diff() - dx * ht / a
    B3 = T * ht - t * B4
    return NovichkovResult(n1, n2, B5, B6, res_T, res_t, B3.diff())


def random_novichkov_params(branch: str, rng: random.Random) -> NovichkovParams:
    while True:
        a1 = _rq(rng)
        a2 = a1 if branch == "multiple" else _rq(rng)
        if a1 == 0 or a2 == 0 or (branch == "distinct" and a1 == a2):
            continue
        return NovichkovParams(a1, a2, _rq(rng), _rq(rng), branch)
