"""Initial profiles built from the descriptors of a run configuration."""

from __future__ import annotations

import numpy as np

from .barenblatt import BarenblattSpec, barenblatt_profile, rescaled_barenblatt_profile
from .config import InitialData
from .grid import RadialGrid, RadialProfile, tail_through
from .transform import Frame


def smooth_bump(r, r_lo: float = 1.0, r_hi: float = 2.0):
    """``exp(1 - 1/(1 - x^2))`` on ``[r_lo, r_hi]`` rescaled to ``x in (-1, 1)``; peak value 1."""
    r = np.asarray(r, dtype=float)
    x = (2.0 * r - r_lo - r_hi) / (r_hi - r_lo)
    out = np.zeros_like(r)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
    return out


def reference_profile(grid: RadialGrid, k: float, frame: Frame) -> RadialProfile:
    """``B_k(., 0)`` in the physical frame, ``B~_k`` in the self-similar one."""
    if frame.is_physical:
        return barenblatt_profile(grid, 0.0, BarenblattSpec(k, frame.T, frame.N))
    return rescaled_barenblatt_profile(grid, k)


def _refit(grid: RadialGrid, values: np.ndarray, c: float) -> RadialProfile:
    return RadialProfile(grid, values, tail_through(c, grid.r_max, values[-1]))


def build_initial(desc: InitialData, grid: RadialGrid, frame: Frame) -> RadialProfile:
    """Initial profile at the start of the run in the given frame."""
    if desc.kind == "barenblatt":
        return reference_profile(grid, desc.params[0], frame)
    if desc.kind == "mean-of-barenblatts":
        ka, kb, w = desc.params
        a = reference_profile(grid, ka, frame)
        b = reference_profile(grid, kb, frame)
        return _refit(grid, w * a.values + (1.0 - w) * b.values, a.tail[0])
    k0, amp, lo, hi = desc.params
    base = reference_profile(grid, k0, frame)
    values = base.values * (1.0 + amp * smooth_bump(grid.nodes, lo, hi))
    if values[-1] == base.values[-1]:
        return base.replace(values=values)
    return _refit(grid, values, base.tail[0])
