"""Exact one-dimensional total variation denoising.

Minimizes 1/2 ||z - b||^2 + gamma sum |z_{i+1} - z_i| in linear time with the
direct taut string method: the current segment carries a lower and an upper
candidate level together with the slack each leaves in the tube of half
width gamma. A segment is emitted at the last break of a level as soon as the
other level can no longer be extended, and the scan restarts right after it.
"""

from __future__ import annotations

import numpy as np

from ..utils.errors import DomainError


def _emit(out: np.ndarray, k0: int, brk: int, level: float) -> int:
    """Write ``level`` on k0..max(brk, k0) and return the next segment start."""
    stop = max(brk, k0) + 1
    out[k0:stop] = level
    return stop


def _taut_string(y: np.ndarray, lam: float, out: np.ndarray) -> np.ndarray:
    n = y.size
    k = k0 = k_minus = k_plus = 0
    v_min, v_max = y[0] - lam, y[0] + lam
    u_min, u_max = lam, -lam
    while True:
        # last point: close the open segment, possibly after emitting
        # one level and restarting the scan behind its break
        while k >= n - 1:
            if k0 == n:
                return out
            if u_min < 0.0:
                k0 = _emit(out, k0, k_minus, v_min)
                k = k_minus = k0
                v_min, u_min = y[k], lam
                u_max = v_min + lam - v_max
            elif u_max > 0.0:
                k0 = _emit(out, k0, k_plus, v_max)
                k = k_plus = k0
                v_max, u_max = y[k], -lam
                u_min = v_max - lam - v_min
            else:
                out[k0:] = v_min + u_min / (k - k0 + 1)
                return out
        u_min += y[k + 1] - v_min
        if u_min < -lam:
            # negative jump after k_minus
            k0 = _emit(out, k0, k_minus, v_min)
            k = k_minus = k_plus = k0
            v_min, v_max = y[k], y[k] + 2.0 * lam
            u_min, u_max = lam, -lam
            continue
        u_max += y[k + 1] - v_max
        if u_max > lam:
            # positive jump after k_plus
            k0 = _emit(out, k0, k_plus, v_max)
            k = k_minus = k_plus = k0
            v_max, v_min = y[k], y[k] - 2.0 * lam
            u_min, u_max = lam, -lam
            continue
        k += 1
        if u_min >= lam:
            k_minus = k
            v_min += (u_min - lam) / (k - k0 + 1)
            u_min = lam
        if u_max <= -lam:
            k_plus = k
            v_max += (u_max + lam) / (k - k0 + 1)
            u_max = -lam


def tv_denoise_1d(b, gamma: float) -> np.ndarray:
    """Exact minimizer of 1/2 ||z - b||^2 + gamma * sum_i |z_{i+1} - z_i|."""
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if b.size == 0:
        raise DomainError("tv_denoise_1d needs at least one value")
    if gamma < 0:
        raise DomainError(f"gamma must be nonnegative, got {gamma}")
    if gamma == 0 or b.size == 1:
        return b.copy()
    return _taut_string(b, float(gamma), np.empty_like(b))


def tv_objective(z, b, gamma: float) -> float:
    z = np.asarray(z, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(0.5 * np.sum((z - b) ** 2) + gamma * np.abs(np.diff(z)).sum())
