"""Polynomials in (y, Pi, P_y) with radical-field coefficients in a."""

from __future__ import annotations

from typing import Iterator, Mapping

from .radical import RadicalElement

Monomial = tuple[int, int, int]  # (y-degree, Pi-degree, P_y-degree)


class PhasePolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, RadicalElement] | None = None):
        self.terms: dict[Monomial, RadicalElement] = {
            k: v for k, v in (terms or {}).items() if not v.is_zero()
        }

    @classmethod
    def zero(cls) -> "PhasePolynomial":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[tuple[Monomial, RadicalElement]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "PhasePolynomial") -> "PhasePolynomial":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return PhasePolynomial(out)

    def __neg__(self) -> "PhasePolynomial":
        return PhasePolynomial({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "PhasePolynomial") -> "PhasePolynomial":
        return self + (-other)

    def __mul__(self, other) -> "PhasePolynomial":
        if not isinstance(other, PhasePolynomial):
            return PhasePolynomial({k: v * other for k, v in self.terms.items()})
        out: dict[Monomial, RadicalElement] = {}
        for (j1, p1, q1), c1 in self.terms.items():
            for (j2, p2, q2), c2 in other.terms.items():
                k = (j1 + j2, p1 + p2, q1 + q2)
                c = c1 * c2
                out[k] = out[k] + c if k in out else c
        return PhasePolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhasePolynomial):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def d_dy(self) -> "PhasePolynomial":
        return PhasePolynomial({(j - 1, p, q): c * j for (j, p, q), c in self.terms.items() if j})

    def momentum_degrees(self) -> set[int]:
        return {p + q for (_, p, q) in self.terms}

    def y_degree(self) -> int:
        return max((j for (j, _, _) in self.terms), default=0)

    def coefficient_terms(self) -> int:
        return sum(c.term_count() for c in self.terms.values())

    def leading_terms(self, limit: int = 3) -> list[str]:
        keys = sorted(self.terms, reverse=True)[:limit]
        return [f"y^{j} Pi^{p} Py^{q}: {self.terms[(j, p, q)]!r}"[:400] for j, p, q in keys]

    def eval_numeric(self, a, y, Pi, Py, *, dps: int | None = None):
        total = 0
        for (j, p, q), c in self.terms.items():
            total += c.eval_numeric(a, dps=dps) * y**j * Pi**p * Py**q
        return total

    def __repr__(self) -> str:
        return f"PhasePolynomial({len(self.terms)} monomials)"
