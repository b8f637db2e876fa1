"""Hot loops of the geodesic integrator.

The profile derivative is a short table of power terms

    x'(a) = lin + sum_j coef_j * (sign_j * (a - root_j)) ** expo_j

and the flow of H = (a/x')**2 P_a**2 + a P_y**2 is advanced with classical RK4.
Two interchangeable backends exist: loops compiled with ``numba.njit`` and a
plain numpy version.  Set ``SIFLOW_DISABLE_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

__all__ = ["BACKENDS", "default_backend", "get_kernel", "EXIT_NONE", "EXIT_DOMAIN", "EXIT_NONFINITE"]

EXIT_NONE = 0
EXIT_DOMAIN = 1
EXIT_NONFINITE = 2


def _numba_enabled() -> bool:
    flag = os.environ.get("SIFLOW_DISABLE_NUMBA", "").strip().lower()
    return numba is not None and flag not in ("1", "true", "yes", "on")


def _make_rk4(derivs, inside):
    def rk4(state0, h, nsteps, every, coef, root, sign, expo, lin, broot, bsign, lo, hi):
        nsamp = nsteps // every + 1
        out = np.empty((nsamp, 5))
        s = state0.copy()
        k1 = np.empty(4)
        k2 = np.empty(4)
        k3 = np.empty(4)
        k4 = np.empty(4)
        tmp = np.empty(4)
        out[0, 0] = 0.0
        out[0, 1:] = s
        j = 1
        for step in range(1, nsteps + 1):
            for stage in range(4):
                if stage == 0:
                    tmp[:] = s
                elif stage == 3:
                    for i in range(4):
                        tmp[i] = s[i] + h * k3[i]
                else:
                    prev = k1 if stage == 1 else k2
                    for i in range(4):
                        tmp[i] = s[i] + 0.5 * h * prev[i]
                a = tmp[0]
                if not inside(a, broot, bsign, lo, hi):
                    return out[:j], step, 1
                xp, xpp = derivs(a, coef, root, sign, expo, lin)
                w = a / xp
                wp = (xp - a * xpp) / (xp * xp)
                k = k1 if stage == 0 else (k2 if stage == 1 else (k3 if stage == 2 else k4))
                k[0] = 2.0 * w * w * tmp[2]
                k[1] = 2.0 * a * tmp[3]
                k[2] = -(2.0 * w * wp * tmp[2] * tmp[2] + tmp[3] * tmp[3])
                k[3] = 0.0
            for i in range(4):
                s[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if not (np.isfinite(s[0]) and np.isfinite(s[1]) and np.isfinite(s[2])):
                return out[:j], step, 2
            if not inside(s[0], broot, bsign, lo, hi):
                return out[:j], step, 1
            if step % every == 0:
                out[j, 0] = step * h
                out[j, 1:] = s
                j += 1
        return out[:j], nsteps, 0

    return rk4


# numpy backend ---------------------------------------------------------


def _derivs_np(a, coef, root, sign, expo, lin):
    d = sign * (a - root)
    p = coef * d**expo
    return lin + p.sum(), (p * expo * sign / d).sum()


def _inside_np(a, broot, bsign, lo, hi):
    return bool(lo < a < hi) and bool(np.all(bsign * (a - broot) > 0.0))


_rk4_numpy = _make_rk4(_derivs_np, _inside_np)


# numba backend ---------------------------------------------------------

_rk4_numba = None


def _build_numba():
    global _rk4_numba
    if _rk4_numba is None:

        @numba.njit(cache=True)
        def derivs(a, coef, root, sign, expo, lin):
            xp = lin
            xpp = 0.0
            for j in range(coef.shape[0]):
                d = sign[j] * (a - root[j])
                p = coef[j] * d ** expo[j]
                xp += p
                xpp += p * expo[j] * sign[j] / d
            return xp, xpp

        @numba.njit(cache=True)
        def inside(a, broot, bsign, lo, hi):
            if not (lo < a < hi):
                return False
            for j in range(broot.shape[0]):
                if bsign[j] * (a - broot[j]) <= 0.0:
                    return False
            return True

        _rk4_numba = numba.njit(_make_rk4(derivs, inside))
    return _rk4_numba


BACKENDS = ("numba", "numpy")


def default_backend() -> str:
    return "numba" if _numba_enabled() else "numpy"


def get_kernel(backend: str | None = None):
    backend = default_backend() if backend is None else backend
    if backend == "numba":
        if numba is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return _build_numba()
    if backend == "numpy":
        return _rk4_numpy
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
