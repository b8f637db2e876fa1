"""Exact arithmetic in Q(a)[R_1, ..., R_t] / (R_k^2 - e_k (a - a_k)).

Coefficients are reduced rational functions of the single variable ``a``
(backed by sympy's sparse polynomial ring over QQ, which uses gmpy2 when it is
available).  A :class:`RadicalElement` maps a bitmask of radicals to such a
coefficient; every radical appears with exponent 0 or 1, so two elements are
equal exactly when their difference has an empty term map.
"""

from __future__ import annotations

from contextlib import nullcontext
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

__all__ = [
    "MAX_BASIS",
    "Rational",
    "RationalFunction",
    "RadicalBasis",
    "RadicalElement",
    "DomainError",
    "to_qq",
]

MAX_BASIS = 8

Rational = Fraction

_RING, _A = ring("a", QQ)


class DomainError(ValueError):
    """Numeric evaluation outside the region where every radicand is positive."""


def to_qq(value) -> QQ.dtype:
    if isinstance(value, QQ.dtype):
        return value
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        f = Fraction(value)
        return QQ(f.numerator, f.denominator)
    raise TypeError(f"not an exact rational: {value!r}")


def _is_scalar(value) -> bool:
    return isinstance(value, (int, Fraction, QQ.dtype))


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _poly(value):
    if isinstance(value, type(_A)):
        return value
    return _RING(to_qq(value))


class RationalFunction:
    """Reduced quotient ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced: bool = False):
        num = _poly(num)
        den = _RING.one if den is None else _poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero:
                den = _RING.one
            elif den != _RING.one:
                _, num, den = num.cofactors(den)
            lc = den.LC
            if lc != 1:
                num = num.quo_ground(lc)
                den = den.quo_ground(lc)
        self.num = num
        self.den = den

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(_RING(to_qq(c)), _RING.one, _reduced=True)

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls(_A, _RING.one, _reduced=True)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "RationalFunction":
        """Polynomial sum(coeffs[k] * a**k)."""
        p = _RING.zero
        for k, c in enumerate(coeffs):
            if c:
                p += _RING(to_qq(c)) * _A**k
        return cls(p, _RING.one, _reduced=True)

    @classmethod
    def linear(cls, slope, root) -> "RationalFunction":
        """slope * (a - root)."""
        s = to_qq(slope)
        return cls(s * _A - s * to_qq(root), _RING.one, _reduced=True)

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_one(self) -> bool:
        return self.den == _RING.one and self.num == _RING.one

    def is_polynomial(self) -> bool:
        return self.den == _RING.one

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.constant(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # arithmetic ---------------------------------------------------------
    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __add__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            if not _is_scalar(other):
                return NotImplemented
            other = RationalFunction.constant(other)
        if other.num.is_zero:
            return self
        if self.num.is_zero:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g, d1, d2 = self.den.cofactors(other.den)
        num = self.num * d2 + other.num * d1
        return RationalFunction(num, d1 * d2 * g)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            if not _is_scalar(other):
                return NotImplemented
            other = RationalFunction.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            if not _is_scalar(other):
                return NotImplemented
            c = to_qq(other)
            if c == 0:
                return RationalFunction(_RING.zero, _RING.one, _reduced=True)
            return RationalFunction(self.num.mul_ground(c), self.den, _reduced=True)
        if self.num.is_zero or other.num.is_zero:
            return RationalFunction(_RING.zero, _RING.one, _reduced=True)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d2 != _RING.one:
            _, n1, d2 = n1.cofactors(d2)
        if d1 != _RING.one:
            _, n2, d1 = n2.cofactors(d1)
        den = d1 * d2
        num = n1 * n2
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        return RationalFunction(num, den, _reduced=True)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.num.is_zero:
            raise ZeroDivisionError("reciprocal of zero rational function")
        lc = self.num.LC
        return RationalFunction(self.den.quo_ground(lc), self.num.quo_ground(lc), _reduced=True)

    def __truediv__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            if not _is_scalar(other):
                return NotImplemented
            c = to_qq(other)
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return RationalFunction(self.num.quo_ground(c), self.den, _reduced=True)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "RationalFunction":
        return RationalFunction.constant(other) * self.reciprocal()

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return self.reciprocal() ** (-k)
        return RationalFunction(self.num**k, self.den**k, _reduced=True)

    def diff(self) -> "RationalFunction":
        n, d = self.num, self.den
        if d == _RING.one:
            return RationalFunction(n.diff(_A), _RING.one, _reduced=True)
        return RationalFunction(n.diff(_A) * d - n * d.diff(_A), d * d)

    # evaluation ---------------------------------------------------------
    def __call__(self, value):
        """Exact value at a rational point."""
        v = to_qq(value)
        d = self.den.evaluate(_A, v) if self.den != _RING.one else QQ(1)
        if d == 0:
            raise ZeroDivisionError(f"pole at a = {value}")
        n = self.num.evaluate(_A, v) if not self.num.is_ground else self.num.LC
        return _to_fraction(n / d)

    def eval_mp(self, x: mpmath.mpf) -> mpmath.mpf:
        d = _horner_mp(self.den, x)
        if d == 0:
            raise ZeroDivisionError("pole in numeric evaluation")
        return _horner_mp(self.num, x) / d

    def degree(self) -> tuple[int, int]:
        return (max(self.num.degree(), 0), self.den.degree())

    def coefficients(self) -> tuple[list[Fraction], list[Fraction]]:
        """Numerator and denominator coefficients, lowest degree first."""

        def dense(p):
            if p.is_zero:
                return [Fraction(0)]
            out = [Fraction(0)] * (p.degree() + 1)
            for (k,), c in p.terms():
                out[k] = _to_fraction(c)
            return out

        return dense(self.num), dense(self.den)

    def __repr__(self) -> str:
        if self.den == _RING.one:
            return f"RationalFunction({self.num.as_expr()})"
        return f"RationalFunction(({self.num.as_expr()})/({self.den.as_expr()}))"

    def __str__(self) -> str:
        if self.den == _RING.one:
            return str(self.num.as_expr())
        return f"({self.num.as_expr()})/({self.den.as_expr()})"


def _horner_mp(p, x: mpmath.mpf) -> mpmath.mpf:
    if p.is_zero:
        return mpmath.mpf(0)
    terms = dict(p)
    acc = mpmath.mpf(0)
    for k in range(p.degree(), -1, -1):
        c = terms.get((k,))
        acc = acc * x
        if c is not None:
            acc += mpmath.mpf(int(c.numerator)) / int(c.denominator)
    return acc


class RadicalBasis:
    """Ordered distinct roots a_k with signs e_k; R_k**2 = e_k (a - a_k)."""

    __slots__ = ("roots", "signs", "_deltas", "_key")

    def __init__(self, pairs: Iterable[tuple]):
        roots, signs = [], []
        for root, sign in pairs:
            if sign not in (1, -1):
                raise ValueError(f"radical sign must be +1 or -1, got {sign!r}")
            roots.append(Fraction(root))
            signs.append(int(sign))
        if len(set(roots)) != len(roots):
            raise ValueError(f"duplicate basis roots: {roots}")
        if len(roots) > MAX_BASIS:
            raise ValueError(f"radical basis limited to {MAX_BASIS} roots, got {len(roots)}")
        self.roots = tuple(roots)
        self.signs = tuple(signs)
        self._deltas = tuple(RationalFunction.linear(s, r) for r, s in zip(self.roots, self.signs))
        self._key = (self.roots, self.signs)

    def __len__(self) -> int:
        return len(self.roots)

    def __eq__(self, other) -> bool:
        return isinstance(other, RadicalBasis) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"RadicalBasis({list(zip(self.roots, self.signs))})"

    def index(self, root) -> int:
        return self.roots.index(Fraction(root))

    def delta(self, idx: int) -> RationalFunction:
        return self._deltas[idx]

    def mask_product(self, mask: int) -> RationalFunction:
        out = RationalFunction.constant(1)
        i = 0
        while mask:
            if mask & 1:
                out = out * self._deltas[i]
            mask >>= 1
            i += 1
        return out


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class RadicalElement:
    """Sum over radical monomials R_S = prod_{k in S} R_k with rational-function coefficients."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: RadicalBasis, terms: Mapping[int, RationalFunction] | None = None):
        self.basis = basis
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, basis: RadicalBasis) -> "RadicalElement":
        return cls(basis)

    @classmethod
    def constant(cls, basis: RadicalBasis, c) -> "RadicalElement":
        return cls(basis, {0: RationalFunction.constant(c)})

    @classmethod
    def from_rational_function(cls, basis: RadicalBasis, f: RationalFunction) -> "RadicalElement":
        return cls(basis, {0: f})

    @classmethod
    def variable(cls, basis: RadicalBasis) -> "RadicalElement":
        return cls(basis, {0: RationalFunction.variable()})

    @classmethod
    def radical(cls, basis: RadicalBasis, idx: int) -> "RadicalElement":
        return cls(basis, {1 << idx: RationalFunction.constant(1)})

    @classmethod
    def delta_power(cls, basis: RadicalBasis, idx: int, twice_exponent: int) -> "RadicalElement":
        """Delta_idx ** (twice_exponent / 2) with the integer part folded into the coefficient."""
        k, odd = divmod(twice_exponent, 2)
        coeff = basis.delta(idx) ** k
        return cls(basis, {(1 << idx) if odd else 0: coeff})

    @classmethod
    def normalize(cls, basis: RadicalBasis, raw: Iterable[tuple]) -> "RadicalElement":
        """Build from terms ``(c, m, exps)`` meaning c * a**m * prod R_k**exps[k]."""
        out: dict[int, RationalFunction] = {}
        a = RationalFunction.variable()
        for c, m, exps in raw:
            exps = tuple(exps) + (0,) * (len(basis) - len(exps))
            if len(exps) != len(basis):
                raise ValueError("exponent vector longer than the basis")
            coeff = RationalFunction.constant(c) * a**m
            mask = 0
            for k, e in enumerate(exps):
                if e < 0:
                    raise ValueError("radical exponents must be non-negative")
                q, odd = divmod(e, 2)
                if q:
                    coeff = coeff * basis.delta(k) ** q
                if odd:
                    mask |= 1 << k
            out[mask] = out[mask] + coeff if mask in out else coeff
        return cls(basis, out)

    # helpers ------------------------------------------------------------
    def _lift(self, other) -> "RadicalElement":
        if isinstance(other, RadicalElement):
            if other.basis != self.basis:
                raise ValueError("radical basis mismatch")
            return other
        if isinstance(other, RationalFunction):
            return RadicalElement(self.basis, {0: other})
        return RadicalElement.constant(self.basis, other)

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(m == 0 for m in self.terms)

    def rational_part(self) -> RationalFunction:
        return self.terms.get(0, RationalFunction.constant(0))

    def support(self) -> int:
        """Bitmask of radicals occurring in any term."""
        s = 0
        for m in self.terms:
            s |= m
        return s

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # ring operations ----------------------------------------------------
    def __neg__(self) -> "RadicalElement":
        return RadicalElement(self.basis, {m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "RadicalElement":
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return RadicalElement(self.basis, out)

    __radd__ = __add__

    def __sub__(self, other) -> "RadicalElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RadicalElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "RadicalElement":
        if not isinstance(other, (RadicalElement, RationalFunction)):
            c = to_qq(other)
            if c == 0:
                return RadicalElement(self.basis)
            return RadicalElement(self.basis, {m: v * c for m, v in self.terms.items()})
        other = self._lift(other)
        out: dict[int, RationalFunction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                common = m1 & m2
                if common:
                    c = c * self.basis.mask_product(common)
                m = m1 ^ m2
                out[m] = out[m] + c if m in out else c
        return RadicalElement(self.basis, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RadicalElement":
        if k < 0:
            return self.invert() ** (-k)
        result = RadicalElement.constant(self.basis, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other) -> "RadicalElement":
        if isinstance(other, RadicalElement):
            return self * other.invert()
        if isinstance(other, RationalFunction):
            return self * other.reciprocal()
        c = to_qq(other)
        if c == 0:
            raise ZeroDivisionError("division by zero")
        return RadicalElement(self.basis, {m: v / c for m, v in self.terms.items()})

    def __rtruediv__(self, other) -> "RadicalElement":
        return self._lift(other) * self.invert()

    def conjugate(self, idx: int) -> "RadicalElement":
        """Image under R_idx -> -R_idx."""
        bit = 1 << idx
        return RadicalElement(self.basis, {m: (-c if m & bit else c) for m, c in self.terms.items()})

    def invert(self) -> "RadicalElement":
        if not self.terms:
            raise ZeroDivisionError("inverse of the zero radical element")
        num = RadicalElement.constant(self.basis, 1)
        den = self
        for idx in range(len(self.basis)):
            if den.support() & (1 << idx):
                conj = den.conjugate(idx)
                num = num * conj
                den = den * conj
        assert den.is_rational(), "conjugation left radicals in the denominator"
        return num * den.rational_part().reciprocal()

    # calculus -----------------------------------------------------------
    def diff(self) -> "RadicalElement":
        """d/da with R_k' = e_k R_k / (2 Delta_k)."""
        out: dict[int, RationalFunction] = {}
        for m, c in self.terms.items():
            d = c.diff()
            for k in _bits(m):
                d = d + c * self.basis.signs[k] / (2 * self.basis.delta(k))
            if not d.is_zero():
                out[m] = out[m] + d if m in out else d
        return RadicalElement(self.basis, out)

    def diff_n(self, order: int) -> "RadicalElement":
        out = self
        for _ in range(order):
            out = out.diff()
        return out

    # numerics -----------------------------------------------------------
    def eval_numeric(self, a, *, dps: int | None = None) -> mpmath.mpf:
        """Value at ``a`` with every R_k on the positive square-root branch."""
        ctx = mpmath.workdps(dps) if dps is not None else nullcontext()
        with ctx:
            x = mpmath.mpf(a) if not isinstance(a, Fraction) else mpmath.mpf(a.numerator) / a.denominator
            roots = {}
            for k in _bits(self.support()):
                d = self.basis.signs[k] * (x - _mpf_of(self.basis.roots[k]))
                if d <= 0:
                    raise DomainError(
                        f"radicand for root a = {self.basis.roots[k]} (sign {self.basis.signs[k]:+d}) "
                        f"is not positive at a = {mpmath.nstr(x, 15)}"
                    )
                roots[k] = mpmath.sqrt(d)
            total = mpmath.mpf(0)
            for m, c in self.terms.items():
                v = c.eval_mp(x)
                for k in _bits(m):
                    v *= roots[k]
                total += v
            return +total

    # display ------------------------------------------------------------
    def term_count(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "RadicalElement(0)"
        parts = []
        for m in sorted(self.terms):
            rad = "*".join(f"R{k + 1}" for k in _bits(m))
            parts.append(f"[{self.terms[m]}]" + (f"*{rad}" if rad else ""))
        return "RadicalElement(" + " + ".join(parts) + ")"


def _mpf_of(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator

