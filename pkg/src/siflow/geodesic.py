"""Geodesic flow of H = Pi**2 + a P_y**2, Pi = (a/x') P_a, with invariant monitoring."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _kernels
from .model import Model, ModelSpec
from .phase import PhasePolynomial
from .radical import DomainError, RadicalElement

__all__ = [
    "PhaseState",
    "integrate_many",
    "Trajectory",
    "ProfileTable",
    "profile_table",
    "compile_phase",
    "integrate",
    "convergence_order",
    "CSV_HEADER",
]

CSV_HEADER = ("t", "a", "y", "Pa", "Py", "H", "Py_int", "S1", "S2")


@dataclass(frozen=True)
class PhaseState:
    a: float
    y: float
    Pa: float
    Py: float
    t: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.y, self.Pa, self.Py], dtype=float)

    @classmethod
    def from_pi(cls, spec: ModelSpec, a: float, y: float, Pi: float, Py: float) -> "PhaseState":
        """State with P_a chosen so that (a/x') P_a = Pi."""
        xp = float(profile_table(spec).xprime(a))
        return cls(a, y, Pi * xp / a, Py)


@dataclass(frozen=True)
class ProfileTable:
    """x'(a) = lin + sum coef * (sign (a - root))**expo, plus the admissible interval."""

    coef: np.ndarray
    root: np.ndarray
    sign: np.ndarray
    expo: np.ndarray
    lin: float
    broot: np.ndarray
    bsign: np.ndarray
    lo: float
    hi: float

    def xprime(self, a):
        a = np.asarray(a, dtype=float)[..., None]
        d = self.sign * (a - self.root)
        return self.lin + (self.coef * d**self.expo).sum(axis=-1)


def profile_table(spec: ModelSpec) -> ProfileTable:
    """Term table of x' read straight off the parameters (no radical algebra)."""
    coef, root, sign, expo = [], [], [], []
    for r in spec.roots:
        params = spec.mu[r.value] if r.multiplicity >= 2 else (spec.xi[r.value],)
        for l, m in enumerate(params, start=1):
            if m == 0:
                continue
            # d/da of m * Delta**(1/2 - l) with Delta = sign (a - root)
            coef.append(float(m * (Fraction(1, 2) - l) * r.sign))
            root.append(float(r.value))
            sign.append(float(r.sign))
            expo.append(-(l + 0.5))
    lin = float(spec.nu / 2) if spec.odd else 0.0
    lo, hi = spec.domain
    # the metric dy**2/a is only Riemannian for a > 0
    lo = 0 if lo is None or lo < 0 else lo
    return ProfileTable(
        np.array(coef, dtype=float),
        np.array(root, dtype=float),
        np.array(sign, dtype=float),
        np.array(expo, dtype=float),
        lin,
        np.array([float(r.value) for r in spec.roots]),
        np.array([float(r.sign) for r in spec.roots]),
        float(lo),
        math.inf if hi is None else float(hi),
    )


# ----------------------------------------------------------------------
# float evaluation of exact phase polynomials


def _poly_float(coeffs: list[Fraction]) -> np.ndarray:
    return np.array([float(c) for c in reversed(coeffs)], dtype=float)


class _CompiledCoefficient:
    __slots__ = ("parts", "roots", "signs")

    def __init__(self, c: RadicalElement):
        self.roots = np.array([float(r) for r in c.basis.roots])
        self.signs = np.array([float(s) for s in c.basis.signs])
        self.parts = []
        for mask, rf in c.terms.items():
            num, den = rf.coefficients()
            bits = [k for k in range(len(c.basis)) if mask >> k & 1]
            self.parts.append((_poly_float(num), _poly_float(den), bits))

    def __call__(self, a: np.ndarray) -> np.ndarray:
        total = np.zeros_like(a)
        for num, den, bits in self.parts:
            v = np.polyval(num, a) / np.polyval(den, a)
            for k in bits:
                v = v * np.sqrt(self.signs[k] * (a - self.roots[k]))
            total += v
        return total


def compile_phase(P: PhasePolynomial):
    """Vectorized float evaluator f(a, y, Pi, Py) of a phase polynomial."""
    terms = [(j, p, q, _CompiledCoefficient(c)) for (j, p, q), c in P.terms.items()]

    def evaluate(a, y, Pi, Py):
        a = np.asarray(a, dtype=float)
        out = np.zeros_like(a)
        for j, p, q, c in terms:
            out += c(a) * y**j * Pi**p * Py**q
        return out

    return evaluate


# ----------------------------------------------------------------------


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # columns a, y, P_a, P_y
    invariants: dict[str, np.ndarray]
    exited: bool = False
    exit_reason: str = ""
    steps: int = 0
    h: float = 0.0
    drift: dict[str, float] = field(default_factory=dict)

    def samples(self) -> list[PhaseState]:
        return [PhaseState(*row, t=t) for t, row in zip(self.times, self.states)]

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            inv = self.invariants
            for i, t in enumerate(self.times):
                a, y, Pa, Py = self.states[i]
                w.writerow(
                    [repr(float(v)) for v in (t, a, y, Pa, Py, inv["H"][i], inv["Py"][i], inv["S1"][i], inv["S2"][i])]
                )


def _relative_drift(values: np.ndarray) -> float:
    ref = values[0]
    dev = np.max(np.abs(values - ref))
    scale = abs(ref) if abs(ref) > 1e-12 else 1.0
    return float(dev / scale)


def integrate(
    model: Model,
    s0: PhaseState,
    T: float,
    h: float = 1e-3,
    *,
    every: int = 10,
    backend: str | None = None,
    table: ProfileTable | None = None,
) -> Trajectory:
    """RK4 over [0, T]; samples (and invariants) every ``every`` steps."""
    if h <= 0 or T <= 0:
        raise ValueError("need T > 0 and h > 0")
    table = profile_table(model.spec) if table is None else table
    if not (table.lo < s0.a < table.hi) or np.any(table.bsign * (s0.a - table.broot) <= 0):
        raise DomainError(f"initial a = {s0.a} is outside the admissible interval ({table.lo}, {table.hi})")
    nsteps = int(round(T / h))
    kernel = _kernels.get_kernel(backend)
    out, steps, code = kernel(
        s0.as_array(), float(h), nsteps, int(every),
        table.coef, table.root, table.sign, table.expo, table.lin,
        table.broot, table.bsign, table.lo, table.hi,
    )
    times = out[:, 0] + s0.t
    states = out[:, 1:].copy()
    a, y, Pa, Py = states.T
    Pi = a / table.xprime(a) * Pa
    inv = {
        "H": Pi**2 + a * Py**2,
        "Py": Py.copy(),
        "S1": compile_phase(model.S1)(a, y, Pi, Py),
        "S2": compile_phase(model.S2)(a, y, Pi, Py),
    }
    reason = {0: "", 1: "left the admissible interval", 2: "non-finite state"}[int(code)]
    traj = Trajectory(times, states, inv, exited=bool(code), exit_reason=reason, steps=int(steps), h=h)
    traj.drift = {k: _relative_drift(v) for k, v in inv.items()}
    return traj


def convergence_order(
    model: Model,
    s0: PhaseState,
    T: float,
    hs=(0.4, 0.2, 0.1, 0.05, 0.025),
    *,
    quantity: str = "H",
    backend: str | None = None,
    floor: float = 1e-11,
) -> tuple[float, list[float]]:
    """Slope of log(drift) against log(h) by least squares.

    Step sizes whose drift is already below ``floor`` measure round-off, not
    truncation error, and are left out of the fit.
    """
    drifts = []
    for h in hs:
        tr = integrate(model, s0, T, h, every=1, backend=backend)
        if tr.exited:
            raise DomainError(f"trajectory {tr.exit_reason} at h = {h}")
        drifts.append(tr.drift[quantity])
    used = [(h, d) for h, d in zip(hs, drifts) if d > floor]
    if len(used) < 2:
        raise ValueError(f"fewer than two step sizes with drift above {floor:g}: {drifts}")
    x, y = np.log([u[0] for u in used]), np.log([u[1] for u in used])
    slope = np.polyfit(x, y, 1)[0]
    return float(slope), drifts


def integrate_many(model: Model, starts, T: float, h: float = 1e-3, **kw) -> list[Trajectory]:
    """Independent trajectories; each is deterministic given (s0, T, h)."""
    table = profile_table(model.spec)
    return [integrate(model, s0, T, h, table=table, **kw) for s0 in starts]
