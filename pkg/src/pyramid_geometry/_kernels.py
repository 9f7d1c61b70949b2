"""Batch numeric kernels with a numba path and a pure-numpy path.

The numba path is used when numba imports cleanly and the environment
variable ``PYRAMID_GEOMETRY_DISABLE_NUMBA`` is unset (or set to ``0``).
Both paths are always importable so they can be cross-checked.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("PYRAMID_GEOMETRY_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return decorator


BACKEND = "numba" if (NUMBA_AVAILABLE and not _DISABLED) else "numpy"


# --- iterative trisection sweep ---------------------------------------------


def _trisect_sweep_numpy(thetas, unit, eps_deg, max_iter):
    thetas = np.asarray(thetas, dtype=np.float64)
    s = np.sin(thetas)
    c = np.cos(thetas)
    half = 0.5 * unit
    cx = np.full(thetas.shape, half)
    third = np.degrees(np.arctan2(cx * s, unit + cx * c))
    iters = np.zeros(thetas.shape, dtype=np.int64)
    done = np.zeros(thetas.shape, dtype=np.bool_)
    for _ in range(max_iter):
        active = ~done
        if not active.any():
            break
        h = cx * s
        p = unit + cx * c
        ix = half * h / p
        new_cx = np.hypot(half, ix)
        new_third = np.degrees(np.arctan2(new_cx * s, unit + new_cx * c))
        step = np.abs(new_third - third)
        cx = np.where(active, new_cx, cx)
        third = np.where(active, new_third, third)
        iters += active
        done |= active & (step < eps_deg)
    return third, iters, done


@njit(cache=True)
def _trisect_sweep_numba(thetas, unit, eps_deg, max_iter):
    n = thetas.shape[0]
    third = np.empty(n)
    iters = np.zeros(n, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    half = 0.5 * unit
    for i in range(n):
        s = math.sin(thetas[i])
        c = math.cos(thetas[i])
        cx = half
        t = math.degrees(math.atan2(cx * s, unit + cx * c))
        for k in range(max_iter):
            ix = half * (cx * s) / (unit + cx * c)
            cx = math.hypot(half, ix)
            nt = math.degrees(math.atan2(cx * s, unit + cx * c))
            step = abs(nt - t)
            t = nt
            iters[i] = k + 1
            if step < eps_deg:
                done[i] = True
                break
        third[i] = t
    return third, iters, done


def trisect_sweep(thetas_rad, unit=1.0, eps_deg=1e-7, max_iter=100, backend=None):
    """Run the iterative trisection for many angles at once.

    Returns ``(third_deg, iterations, converged)`` arrays aligned with the input.
    """
    backend = backend or BACKEND
    thetas = np.ascontiguousarray(thetas_rad, dtype=np.float64).ravel()
    if backend == "numba":
        return _trisect_sweep_numba(thetas, float(unit), float(eps_deg), int(max_iter))
    if backend == "numpy":
        return _trisect_sweep_numpy(thetas, float(unit), float(eps_deg), int(max_iter))
    raise ValueError(f"unknown backend {backend!r}")


# --- consecutive-leg brute force ----------------------------------------------


def _consecutive_leg_scan_numpy(limit, chunk=1 << 20):
    found = []
    for start in range(1, limit, chunk):
        a = np.arange(start, min(start + chunk, limit), dtype=np.int64)
        s = 2 * a * a + 2 * a + 1
        c = np.rint(np.sqrt(s.astype(np.float64))).astype(np.int64)
        hit = c * c == s
        found.append(np.stack([a[hit], a[hit] + 1, c[hit]], axis=1))
    if not found:
        return np.empty((0, 3), dtype=np.int64)
    return np.concatenate(found)


@njit(cache=True)
def _consecutive_leg_mask(limit):
    hit = np.zeros(limit, dtype=np.bool_)
    for a in range(1, limit):
        s = 2 * a * a + 2 * a + 1
        c = np.int64(math.sqrt(s) + 0.5)
        hit[a] = c * c == s
    return hit


def _consecutive_leg_scan_numba(limit):
    a = np.flatnonzero(_consecutive_leg_mask(limit)).astype(np.int64)
    c = np.rint(np.sqrt((2 * a * a + 2 * a + 1).astype(np.float64))).astype(np.int64)
    return np.stack([a, a + 1, c], axis=1)


def consecutive_leg_scan(limit, backend=None):
    """All (a, a+1, c) with a < limit and a^2 + (a+1)^2 = c^2, by exhaustive search.

    ``limit`` must stay below ~3e7 so that 2a^2 fits float64 square roots exactly.
    """
    if limit > 30_000_000:
        raise ValueError("scan limit too large for exact float64 square roots")
    backend = backend or BACKEND
    if backend == "numba":
        return _consecutive_leg_scan_numba(int(limit))
    if backend == "numpy":
        return _consecutive_leg_scan_numpy(int(limit))
    raise ValueError(f"unknown backend {backend!r}")
