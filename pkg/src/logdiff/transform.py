"""Coordinate changes between the physical frame (r, t, u) and the self-similar frame (y, s, u~).

    u~(y, s) = (T-t)^(-N/(N-2)) u(y (T-t)^(-1/(N-2)), t),    s = -log(T-t)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from .grid import RadialGrid, RadialProfile, tail_through

FRAMES = ("physical", "selfsimilar")


@dataclass(frozen=True)
class Frame:
    kind: str
    T: float
    N: int

    def __post_init__(self):
        if self.kind not in FRAMES:
            raise ValueError(f"frame kind must be one of {FRAMES}, got {self.kind!r}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if int(self.N) != self.N or self.N < 3:
            raise ValueError(f"N must be an integer >= 3, got {self.N}")

    @property
    def is_physical(self) -> bool:
        return self.kind == "physical"

    @property
    def initial_clock(self) -> float:
        """Clock value at t = 0 (0 in the physical frame, -log T otherwise)."""
        return 0.0 if self.is_physical else 0.0 - math.log(self.T)

    def selfsimilar_time(self, t: float) -> float:
        if not t < self.T:
            raise ValueError(f"t={t} is not before the extinction time T={self.T}")
        return -math.log(self.T - t)

    def physical_time(self, s: float) -> float:
        return self.T - math.exp(-s)


def _power(x: float, p: float) -> float:
    return math.exp(p * math.log(x))


def evaluate(profile: RadialProfile, radii) -> np.ndarray:
    """Monotone cubic interpolation inside the grid; the tail law (or zero) beyond it."""
    radii = np.asarray(radii, dtype=float)
    grid = profile.grid
    out = np.empty_like(radii)
    inside = radii <= grid.r_max
    out[inside] = PchipInterpolator(grid.nodes, profile.values)(radii[inside])
    if profile.tail is None:
        out[~inside] = 0.0
    else:
        c, k = profile.tail
        out[~inside] = c / (k + radii[~inside] ** 2)
    return out


def resample(profile: RadialProfile, target: RadialGrid) -> RadialProfile:
    """Profile values on another grid; the tail amplitude is kept and refitted to the new boundary."""
    values = evaluate(profile, target.nodes)
    tail = None
    if profile.tail is not None and values[-1] > 0.0:
        tail = tail_through(profile.tail[0], target.r_max, values[-1])
        if tail[1] <= 0.0:
            tail = None
    return RadialProfile(target, values, tail)


def _scaled(profile: RadialProfile, radius_factor: float, value_factor: float,
            tail_c_factor: float, tail_k_factor: float) -> RadialProfile:
    grid = profile.grid
    new_grid = RadialGrid(grid.nodes * radius_factor, grid.dimension, grid.stretch)
    tail = None
    if profile.tail is not None:
        c, k = profile.tail
        tail = (c * tail_c_factor, k * tail_k_factor)
    return RadialProfile(new_grid, profile.values * value_factor, tail)


def to_selfsimilar(u: RadialProfile, t: float, frame: Frame,
                   target: Optional[RadialGrid] = None) -> Tuple[RadialProfile, float]:
    """Rescale a physical-frame profile at time ``t``; returns ``(u~, s)``.

    Without ``target`` the result lives on the exactly scaled node set
    ``y_i = r_i (T-t)^(1/(N-2))`` and no interpolation happens.
    """
    if not t < frame.T:
        raise ValueError(f"cannot rescale at t={t} >= T={frame.T}")
    n = frame.N
    tau = frame.T - t
    scale = _power(tau, 1.0 / (n - 2))
    out = _scaled(u, scale, _power(tau, -n / (n - 2)), 1.0 / tau, _power(tau, 2.0 / (n - 2)))
    if target is not None:
        out = resample(out, target)
    return out, -math.log(tau)


def from_selfsimilar(v: RadialProfile, s: float, frame: Frame,
                     target: Optional[RadialGrid] = None) -> Tuple[RadialProfile, float]:
    """Inverse of :func:`to_selfsimilar`; returns ``(u, t)`` with ``t = T - e^-s``."""
    n = frame.N
    tau = math.exp(-s)
    inv_scale = _power(tau, -1.0 / (n - 2))
    out = _scaled(v, inv_scale, _power(tau, n / (n - 2)), tau, _power(tau, -2.0 / (n - 2)))
    if target is not None:
        out = resample(out, target)
    return out, frame.T - tau
