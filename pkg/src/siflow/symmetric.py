"""Elementary symmetric functions of (deflated) root multisets.

Every family used by the construction is the list of elementary symmetric
functions of the roots left over after dividing F by some linear factors:

    F(t) / ((t - a_alpha)**s (t - a_i)) = sum_m (-1)**m e_m t**(deg - m)

so a :class:`SigmaTable` simply stores ``e_0 .. e_deg`` and answers every other
index with an exact zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

__all__ = [
    "RootMultiset",
    "SigmaTable",
    "sigma",
    "sigma_deflated",
    "elementary_symmetric",
    "pochhammer",
    "pochhammer_ratio",
]


@dataclass(frozen=True)
class RootMultiset:
    """Ordered (root, multiplicity) pairs of a monic polynomial."""

    entries: tuple[tuple[Fraction, int], ...]

    def __init__(self, entries: Iterable[tuple]):
        norm = tuple((Fraction(r), int(m)) for r, m in entries)
        roots = [r for r, _ in norm]
        if len(set(roots)) != len(roots):
            raise ValueError(f"roots must be pairwise distinct: {roots}")
        if any(m < 1 for _, m in norm):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "entries", norm)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, root) -> int:
        root = Fraction(root)
        for r, m in self.entries:
            if r == root:
                return m
        return 0

    def flat(self) -> list[Fraction]:
        return [r for r, m in self.entries for _ in range(m)]

    def coefficients(self) -> list[Fraction]:
        """A_0 .. A_n of F(a) = sum A_k a**k (A_n = 1)."""
        e = elementary_symmetric(self.flat())
        n = len(e) - 1
        return [(-1) ** (n - k) * e[n - k] for k in range(n + 1)]


@dataclass(frozen=True)
class SigmaTable:
    """Values e_0..e_deg of one symmetric-function family, zero-padded on access."""

    family: str
    values: tuple[Fraction, ...]

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.values):
            return self.values[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_list(self) -> list[Fraction]:
        return list(self.values)


def elementary_symmetric(roots: Sequence[Fraction]) -> list[Fraction]:
    e = [Fraction(1)]
    for r in roots:
        nxt = e + [Fraction(0)]
        for k in range(1, len(nxt)):
            nxt[k] += r * e[k - 1]
        e = nxt
    return e


def sigma(F: RootMultiset) -> SigmaTable:
    return SigmaTable("sigma", tuple(elementary_symmetric(F.flat())))


def sigma_deflated(F: RootMultiset, alpha=None, s: int = 0, i=None) -> SigmaTable:
    """Symmetric functions of F / ((t - alpha)**s (t - i)).

    ``alpha=None`` (or ``s=0``) and ``i`` given is the single simple-root family;
    ``i`` may also be an iterable of several simple roots.
    """
    counts = {r: m for r, m in F.entries}
    tag = []
    if alpha is not None and s:
        alpha = Fraction(alpha)
        if s < 0:
            raise ValueError("deflation order must be non-negative")
        have = counts.get(alpha, 0)
        if s > have:
            raise ValueError(f"cannot divide by (t - {alpha})^{s}: multiplicity is {have}")
        counts[alpha] = have - s
        tag.append(f"({alpha},{s})")
    if i is not None:
        simple = [i] if not isinstance(i, (list, tuple)) else list(i)
        for root in simple:
            root = Fraction(root)
            if alpha is not None and s and root == alpha:
                raise ValueError("simple root must differ from the deflated root")
            if F.multiplicity(root) != 1:
                raise ValueError(f"{root} is not a simple root of F")
            counts[root] -= 1
            tag.append(str(root))
    flat = [r for r, _ in F.entries for _ in range(counts[r])]
    return SigmaTable("sigma^" + ",".join(tag) if tag else "sigma", tuple(elementary_symmetric(flat)))


def pochhammer(x: Fraction, k: int) -> Fraction:
    """Rising factorial (x)_k."""
    out = Fraction(1)
    for j in range(k):
        out *= x + j
    return out


@lru_cache(maxsize=None)
def pochhammer_ratio(l: int) -> Fraction:
    """(1/2)_{l-1} / (l-1)!"""
    if l < 1:
        raise ValueError("pochhammer_ratio needs l >= 1")
    return pochhammer(Fraction(1, 2), l - 1) / factorial(l - 1)
