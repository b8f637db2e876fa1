"""Seeded random model specs and the exact checks run over them."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .model import (
    ModelSpec,
    apply_op_n,
    build_coefficients,
    op_n_rhs,
    verify_b_recurrence,
)

__all__ = ["random_rational", "random_spec", "random_specs", "SpecCheck", "check_spec", "sweep"]


def random_rational(rng: random.Random, lo: int = -5, hi: int = 5, den: int = 4) -> Fraction:
    q = rng.randint(1, den)
    return Fraction(rng.randint(lo * q, hi * q), q)


def _nonzero(rng: random.Random) -> Fraction:
    while True:
        v = random_rational(rng, -3, 3, 3)
        if v:
            return v


def random_spec(rng: random.Random, parity: str, n: int | None = None, *, max_n: int = 5) -> ModelSpec:
    """Random F of degree n with rational roots in [-5, 5] and a consistent sign pattern.

    Multiplicities are an arbitrary composition of n.  A random gap between
    consecutive roots is the working interval: roots below it get sign +1,
    roots above it sign -1.
    """
    n = rng.randint(1, max_n) if n is None else n
    mults = []
    left = n
    while left:
        m = rng.randint(1, left)
        mults.append(m)
        left -= m
    values: set[Fraction] = set()
    while len(values) < len(mults):
        values.add(random_rational(rng))
    values_sorted = sorted(values)
    rng.shuffle(mults)
    cut = rng.randint(0, len(values_sorted))
    roots, mu, xi = [], {}, {}
    for i, (v, m) in enumerate(zip(values_sorted, mults)):
        roots.append((v, m, 1 if i < cut else -1))
        if m >= 2:
            mu[v] = tuple(_nonzero(rng) for _ in range(m))
        else:
            xi[v] = _nonzero(rng)
    nu = _nonzero(rng) if parity == "odd" else None
    return ModelSpec(roots=roots, parity=parity, mu=mu, xi=xi, nu=nu)


def random_specs(seed: int, count: int, parity: str, *, max_n: int = 5) -> list[ModelSpec]:
    rng = random.Random(f"{seed}:{parity}")
    return [random_spec(rng, parity, max_n=max_n) for _ in range(count)]


@dataclass
class SpecCheck:
    label: str
    ode: bool
    b_recurrence: bool
    c_derivative: bool
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.ode and self.b_recurrence and self.c_derivative


def check_spec(spec: ModelSpec) -> SpecCheck:
    """Exact ODE, b-recurrence and c' = -b x' checks for one spec."""
    t0 = time.perf_counter()
    cs = build_coefficients(spec)
    failures = []
    ode = (apply_op_n(spec, cs.x) - op_n_rhs(spec)).is_zero()
    if not ode:
        failures.append("Op_n x")
    rec = True
    for name, res in verify_b_recurrence(cs, spec):
        if not res.is_zero():
            rec = False
            failures.append(name)
    cder = True
    for k in range(cs.k_min, spec.n + 1):
        if not (cs.c_at(k).diff() + cs.b_at(k) * cs.dx).is_zero():
            cder = False
            failures.append(f"c'_{k} + b_{k} x'")
    return SpecCheck(spec.label(), ode, rec, cder, failures, time.perf_counter() - t0)


def sweep(seed: int, count: int, parities=("even", "odd"), *, max_n: int = 5) -> list[SpecCheck]:
    out = []
    for parity in parities:
        out.extend(check_spec(s) for s in random_specs(seed, count, parity, max_n=max_n))
    return out
