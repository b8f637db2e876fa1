"""Closed-form antiderivatives over the radical field and the terminating 2F1.

    I[l, M](alpha, beta) = int (l - 1/2) da / (Delta_alpha**(l + 1/2) Delta_beta**(M + 1/2))

is returned as an exact :class:`RadicalElement`; callers check it by
differentiation, never by integrating.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .radical import RadicalBasis, RadicalElement, RationalFunction
from .symmetric import pochhammer, pochhammer_ratio

__all__ = [
    "hyp2f1_terminating",
    "hyp2f1_terms",
    "integral_simple_partner",
    "integral_general",
]


def hyp2f1_terms(a: Fraction, b: int, c: Fraction) -> list[Fraction]:
    """Coefficients t_j of 2F1(a, b; c; z) = sum_j t_j z**j for a non-positive integer b.

    Raises ``ZeroDivisionError`` naming the index if a lower Pochhammer factor
    vanishes before the series terminates.
    """
    if b > 0 or int(b) != b:
        raise ValueError("terminating 2F1 needs a non-positive integer upper parameter")
    a, c = Fraction(a), Fraction(c)
    out = []
    for j in range(-int(b) + 1):
        den = pochhammer(c, j)
        if den == 0:
            raise ZeroDivisionError(f"lower parameter {c}: (c)_{j} = 0 before termination")
        out.append(pochhammer(a, j) * pochhammer(Fraction(b), j) / (den * factorial(j)))
    return out


def hyp2f1_terminating(a: Fraction, b: int, c: Fraction, z):
    """Evaluate the terminating series at ``z`` (a number, RationalFunction or RadicalElement)."""
    coeffs = hyp2f1_terms(a, b, c)
    acc = None
    for t in reversed(coeffs):
        acc = t if acc is None else acc * z + t
    return acc


def integral_simple_partner(basis: RadicalBasis, alpha: int, beta: int, l: int) -> RadicalElement:
    """I[l, 0] as a finite sum of half-integer powers of Delta_alpha times sqrt(Delta_beta)."""
    ra, rb = basis.roots[alpha], basis.roots[beta]
    ea, eb = basis.signs[alpha], basis.signs[beta]
    if ra == rb:
        raise ValueError("antiderivative needs distinct roots")
    eta = ea * (rb - ra)
    total = RadicalElement.zero(basis)
    for s in range(1, l + 1):
        w = pochhammer_ratio(l - s + 1) / eta**s
        total = total + RadicalElement.delta_power(basis, alpha, -(2 * (l - s) + 1)) * w
    return RadicalElement.delta_power(basis, beta, 1) * total * (Fraction(eb) / pochhammer_ratio(l))


def integral_general(basis: RadicalBasis, alpha: int, beta: int, l: int, M: int) -> RadicalElement:
    """I[l, M] through the terminating 2F1(1, -(l+M-1); 3/2 - l; z)."""
    if l < 1 or M < 0:
        raise ValueError("need l >= 1 and M >= 0")
    ra, rb = basis.roots[alpha], basis.roots[beta]
    ea, eb = basis.signs[alpha], basis.signs[beta]
    if ra == rb:
        raise ValueError("antiderivative needs distinct roots (eta~ = 0)")
    eta_t = eb * (ra - rb)
    # z = -sigma Delta_alpha / eta~ = (a - a_alpha) / (a_beta - a_alpha)
    z = RationalFunction.linear(Fraction(1) / (rb - ra), ra)
    f = hyp2f1_terminating(Fraction(1), -(l + M - 1), Fraction(3, 2) - l, z)
    f = RadicalElement.from_rational_function(basis, f if isinstance(f, RationalFunction) else RationalFunction.constant(f))
    pref = (
        RadicalElement.delta_power(basis, beta, 1 - 2 * M)
        * RadicalElement.delta_power(basis, alpha, -(2 * l - 1))
        * (Fraction(-ea) / eta_t)
    )
    return pref * f
