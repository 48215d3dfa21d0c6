"""The mean-value coefficient a = (log u - log v)/(u - v) and its growth bounds."""

from __future__ import annotations

import numpy as np

from ..grid import GridMismatchError, RadialProfile

COINCIDENT_RTOL = 1e-12


def mean_value_coefficient(u: RadialProfile, v: RadialProfile) -> RadialProfile:
    """Nodewise ``int_0^1 dθ / (θ u + (1-θ) v)``; equal to ``1/u`` where ``u ≈ v``."""
    if not u.grid.same_as(v.grid):
        raise GridMismatchError("profiles live on different grids")
    a, b = u.values, v.values
    if np.any(~(a > 0.0)) or np.any(~(b > 0.0)):
        raise ValueError("the mean-value coefficient needs strictly positive profiles")
    d = a - b
    close = np.abs(d) < COINCIDENT_RTOL * a
    safe_d = np.where(close, 1.0, d)
    out = np.where(close, 1.0 / a, np.log1p(d / b) / safe_d)
    return RadialProfile(u.grid, out)


def growth_bounds(r, k1: float, k2: float, N: int):
    """Lower and upper bounds ``(k2 + r^2)/(2(N-2))`` and ``(k1 + r^2)/(2(N-2))``."""
    r2 = np.asarray(r, dtype=float) ** 2
    return (k2 + r2) / (2.0 * (N - 2)), (k1 + r2) / (2.0 * (N - 2))


def coefficient_bound_margin(coefficient: RadialProfile, k1: float, k2: float) -> float:
    """Smallest relative slack of the coefficient inside its bounds (negative = violated)."""
    grid = coefficient.grid
    lower, upper = growth_bounds(grid.nodes, k1, k2, grid.dimension)
    a = coefficient.values
    return float(min(np.min(a / lower - 1.0), np.min(1.0 - a / upper)))
