"""Radial Newtonian and ball Green potentials.

Both use the integrated-by-parts forms, with ``m(r) = int_0^r f rho^(N-1) drho``:

    Z(r) = [ r^(2-N) m(r) + int_r^inf f rho drho ] / (N-2)
    G(r) = [ int_0^r psi rho drho - r^(2-N) m(r) ] / (N-2)

The moments are exact for the piecewise-linear interpolant of the nodal data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..grid import RadialGrid, RadialProfile, cell_moments, cumulative_moment

FLAVORS = ("newtonian", "green_ball")


class InfiniteMassError(ValueError):
    """The source has infinite total mass, so its Newtonian potential is infinite."""


def _moments_at(values: np.ndarray, grid: RadialGrid, radii: np.ndarray, power: int) -> np.ndarray:
    """``int_0^rho f s^power ds`` at arbitrary ``rho <= r_max``."""
    cum = cumulative_moment(values, grid, power)
    nodes = grid.nodes
    j = np.clip(np.searchsorted(nodes, radii, side="right") - 1, 0, grid.size - 2)
    lo = nodes[j]
    slope = (values[j + 1] - values[j]) / (nodes[j + 1] - lo)
    part = cell_moments(grid, power, lo, np.asarray(radii, dtype=float), values[j], slope)
    return cum[j] + part


@dataclass(frozen=True, eq=False)
class PotentialProfile:
    grid: RadialGrid
    values: np.ndarray
    flavor: str
    radius: Optional[float] = None
    exterior_mass: float = 0.0

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}")
        if self.flavor == "green_ball" and self.radius is None:
            raise ValueError("a ball Green potential needs its radius")

    def at(self, r) -> np.ndarray:
        """Evaluate at arbitrary radii; beyond the grid the Newtonian potential is ``m / ((N-2) r^(N-2))``."""
        r = np.asarray(r, dtype=float)
        limit = self.grid.r_max if self.radius is None else self.radius
        if self.flavor == "green_ball" and np.any(r > limit * (1 + 1e-12)):
            raise ValueError(f"the ball Green potential is defined only up to r = {limit}")
        inside = r <= self.grid.r_max
        out = np.empty_like(r)
        out[inside] = np.interp(r[inside], self.grid.nodes, self.values)
        n = self.grid.dimension
        out[~inside] = self.exterior_mass / ((n - 2) * r[~inside] ** (n - 2))
        return out

    def as_profile(self) -> RadialProfile:
        return RadialProfile(self.grid, self.values)


def newtonian_potential_radial(f: RadialProfile) -> PotentialProfile:
    """Potential ``Z`` of ``|f|`` with ``ΔZ = -|f|`` and ``Z -> 0`` at infinity.

    A profile without a tail is zero beyond ``r_max``; a tail with ``c > 0`` has
    infinite mass in every dimension ``N >= 3`` and is rejected.
    """
    if f.tail is not None and f.tail[0] > 0.0:
        raise InfiniteMassError(
            f"source decays like c/r^2 (c={f.tail[0]}); its mass is infinite in dimension {f.grid.dimension}"
        )
    grid = f.grid
    n = grid.dimension
    a = np.abs(f.values)
    r = grid.nodes
    m = cumulative_moment(a, grid, n - 1)
    first = cumulative_moment(a, grid, 1)
    outer = first[-1] - first
    z = np.empty_like(r)
    z[1:] = r[1:] ** (2 - n) * m[1:] + outer[1:]
    z[0] = outer[0]
    return PotentialProfile(grid, z / (n - 2), "newtonian", exterior_mass=float(m[-1]))


def green_potential_radial(psi: RadialProfile, R: float) -> PotentialProfile:
    """``G(r) = int_0^r rho^(1-N) int_0^rho psi s^(N-1) ds drho`` on the ball of radius ``R``.

    The returned grid holds the nodes below ``R`` plus ``R`` itself.
    """
    grid = psi.grid
    if not R > 0 or R > grid.r_max * (1 + 1e-12):
        raise ValueError(f"ball radius {R} is outside the grid coverage (0, {grid.r_max}]")
    R = min(R, grid.r_max)
    n = grid.dimension
    nodes = grid.nodes[grid.nodes < R]
    nodes = np.concatenate((nodes, [R]))
    if nodes.size < 3:
        raise ValueError("the ball must contain at least two grid cells")
    m = _moments_at(psi.values, grid, nodes, n - 1)
    first = _moments_at(psi.values, grid, nodes, 1)
    g = np.zeros_like(nodes)
    g[1:] = (first[1:] - nodes[1:] ** (2 - n) * m[1:]) / (n - 2)
    sub = RadialGrid(nodes, n, grid.stretch)
    return PotentialProfile(sub, g, "green_ball", radius=R)


def log_growth_fit(potential: PotentialProfile, r_min: float = 1.0) -> Tuple[float, float]:
    """Constants ``(C2, C3)`` with ``G(r) >= C2 log r - C3`` for ``r >= r_min``.

    ``C2`` is the least-squares slope of ``G`` against ``log r``; ``C3`` is the
    smallest offset making the bound hold at every node.  ``C2 > 0`` flags
    logarithmic growth.
    """
    r = potential.grid.nodes
    sel = r >= r_min
    if np.count_nonzero(sel) < 2:
        raise ValueError(f"need at least two nodes beyond r = {r_min}")
    x = np.log(r[sel])
    y = potential.values[sel]
    c2 = float(np.polyfit(x, y, 1)[0])
    c3 = float(np.max(c2 * x - y))
    return c2, c3
