"""Radial meshes, radial profiles and dimension-aware quadrature.

Every integral over R^N of a radial function is evaluated as
``omega_N * int_0^inf f(r) r^(N-1) dr``.  The part on ``[0, r_max]`` uses the
trapezoid rule on the grid nodes; the part beyond ``r_max`` comes from the
analytic far-field law ``c / (k + r^2)`` that a profile may carry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

TAIL_MATCH_RTOL = 1e-8
TAIL_CERTIFY_RTOL = 1e-8


class DivergentIntegralError(ValueError):
    """Raised when a far-field law makes an integral over R^N infinite."""


class GridMismatchError(ValueError):
    """Raised when two profiles that must share a grid do not."""


def sphere_area(dimension: int) -> float:
    """Surface area of the unit sphere S^(N-1) in R^N."""
    return 2.0 * math.pi ** (dimension / 2.0) / math.gamma(dimension / 2.0)


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing radial nodes ``0 = r_0 < ... < r_M = r_max``."""

    nodes: np.ndarray
    dimension: int
    stretch: float = 1.0

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise ValueError("a radial grid needs at least 3 nodes")
        if not np.all(np.isfinite(nodes)):
            raise ValueError("grid nodes must be finite")
        if nodes[0] != 0.0:
            raise ValueError("the first node must be exactly r = 0")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("grid nodes must be strictly increasing")
        if int(self.dimension) != self.dimension or self.dimension < 3:
            raise ValueError(f"dimension must be an integer >= 3, got {self.dimension}")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "dimension", int(self.dimension))

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def spacing(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def omega(self) -> float:
        return sphere_area(self.dimension)

    @property
    def faces(self) -> np.ndarray:
        """Cell faces: midpoints between consecutive nodes."""
        r = self.nodes
        return 0.5 * (r[1:] + r[:-1])

    @property
    def cell_volumes(self) -> np.ndarray:
        """Finite-volume cell measures ``int r^(N-1) dr`` of the node-centred cells.

        The origin cell is ``[0, r_1/2]``; the last cell is ``[r_(M-1/2), r_M]``.
        The factor omega_N is not included.
        """
        n = self.dimension
        edges = np.concatenate(([0.0], self.faces, [self.r_max]))
        return (edges[1:] ** n - edges[:-1] ** n) / n

    @property
    def trapezoid_weights(self) -> np.ndarray:
        """Weights ``w`` such that ``sum(w * f)`` is the trapezoid rule for ``int f r^(N-1) dr``."""
        h = self.spacing
        w = np.zeros(self.size)
        w[:-1] += 0.5 * h
        w[1:] += 0.5 * h
        return w * self.nodes ** (self.dimension - 1)

    def same_as(self, other: "RadialGrid") -> bool:
        return self is other or (
            self.dimension == other.dimension
            and self.size == other.size
            and np.array_equal(self.nodes, other.nodes)
        )


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Nodal values of a radial function plus an optional far-field law.

    ``tail = (c, k)`` means ``f(r) ~ c / (k + r^2)`` for ``r > r_max``.  Without a
    tail the function is taken to vanish beyond ``r_max``.
    """

    grid: RadialGrid
    values: np.ndarray
    tail: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise ValueError(
                f"profile has {values.size} values but the grid has {self.grid.size} nodes"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.tail is not None:
            c, k = (float(x) for x in self.tail)
            if not (c >= 0.0 and k > 0.0):
                raise ValueError(f"tail law needs c >= 0 and k > 0, got c={c}, k={k}")
            boundary = c / (k + self.grid.r_max**2)
            if abs(values[-1] - boundary) > TAIL_MATCH_RTOL * abs(values[-1]) + 1e-300:
                raise ValueError(
                    f"tail law gives {boundary!r} at r_max but the boundary node holds {values[-1]!r}"
                )
            object.__setattr__(self, "tail", (c, k))

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    def replace(self, values=None, tail=...) -> "RadialProfile":
        return RadialProfile(
            self.grid,
            self.values if values is None else values,
            self.tail if tail is ... else tail,
        )


def tail_through(c: float, r_max: float, boundary_value: float) -> Tuple[float, float]:
    """Tail law with amplitude ``c`` passing exactly through the boundary value."""
    return c, c / boundary_value - r_max**2


def make_grid(r_max: float, m_nodes: int, stretch: float = 1.0, dimension: int = 3) -> RadialGrid:
    """Grid with ``m_nodes + 1`` nodes whose spacings grow geometrically by ``stretch``."""
    for name, value in (("r_max", r_max), ("stretch", stretch)):
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value}")
    if int(dimension) != dimension or dimension < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {dimension}")
    if r_max <= 0.0:
        raise ValueError(f"r_max must be positive, got {r_max}")
    if int(m_nodes) != m_nodes or m_nodes < 16:
        raise ValueError(f"m_nodes must be an integer >= 16, got {m_nodes}")
    if stretch < 1.0:
        raise ValueError(f"stretch must be >= 1, got {stretch}")
    m = int(m_nodes)
    steps = stretch ** np.arange(m)
    nodes = np.concatenate(([0.0], np.cumsum(steps)))
    nodes *= r_max / nodes[-1]
    nodes[-1] = r_max
    return RadialGrid(nodes, int(dimension), float(stretch))


def sample(grid: RadialGrid, func, tail=None) -> RadialProfile:
    """Profile of ``func`` evaluated at the grid nodes."""
    return RadialProfile(grid, np.asarray(func(grid.nodes), dtype=float), tail)


def _check_finite(values: np.ndarray):
    if np.any(np.isnan(values)):
        raise ValueError("profile values contain NaN")


def integrate_radial(f: RadialProfile) -> float:
    """``int_{R^N} f dx`` for a profile whose far field is integrable."""
    _check_finite(f.values)
    grid = f.grid
    if f.tail is not None and f.tail[0] > 0.0:
        # c r^(N-1) / (k + r^2) ~ r^(N-3): integrable only for N <= 1.
        raise DivergentIntegralError(
            f"tail c/(k+r^2) with c={f.tail[0]} is not integrable in dimension {grid.dimension}"
        )
    return grid.omega * float(np.dot(grid.trapezoid_weights, f.values))


def difference_decay(tail_f, tail_g) -> float:
    """Decay power ``p`` with ``|f - g| ~ r^-p`` beyond r_max (``inf`` if the laws agree)."""
    cf, kf = tail_f if tail_f is not None else (0.0, 1.0)
    cg, kg = tail_g if tail_g is not None else (0.0, 1.0)
    if cf == 0.0 and cg == 0.0:
        return math.inf
    if not math.isclose(cf, cg, rel_tol=1e-12):
        return 2.0
    if math.isclose(kf, kg, rel_tol=1e-12, abs_tol=1e-14):
        return math.inf
    return 4.0


def tail_integrable(decay: float, dimension: int, weight_decay: float = 0.0) -> bool:
    """Whether ``int^inf r^(-decay - weight_decay) r^(N-1) dr`` converges."""
    return decay + weight_decay - (dimension - 1) > 1.0


def _tail_difference_integral(tail_f, tail_g, r_max: float, dimension: int) -> float:
    """Exact ``omega_3 int_{r_max}^inf (c/(a+r^2) - c/(b+r^2)) r^2 dr`` for equal amplitudes."""
    c = 0.5 * (tail_f[0] + tail_g[0])
    a, b = tail_f[1], tail_g[1]
    sa, sb = math.sqrt(a), math.sqrt(b)
    # r^2/(a+r^2) - r^2/(b+r^2) = b/(b+r^2) - a/(a+r^2)
    value = sb * math.atan(sb / r_max) - sa * math.atan(sa / r_max)
    return sphere_area(dimension) * c * value


def _tail_contribution(f: RadialProfile, g: RadialProfile, weight_decay: float = 0.0) -> float:
    grid = f.grid
    n = grid.dimension
    decay = difference_decay(f.tail, g.tail)
    if math.isinf(decay):
        return 0.0
    if not tail_integrable(decay, n, weight_decay):
        raise DivergentIntegralError(
            f"far-field difference decays like r^-{decay:g} (weight r^-{weight_decay:g}); "
            f"its integral diverges in dimension {n}"
        )
    if n == 3 and decay == 4.0 and weight_decay == 0.0:
        return _tail_difference_integral(f.tail, g.tail, grid.r_max, n)
    raise DivergentIntegralError(
        f"cannot certify the far-field contribution in dimension {n}"
    )  # pragma: no cover - unreachable for the c/(k+r^2) family


def integrate_difference(f: RadialProfile, g: RadialProfile, absolute: bool = False) -> float:
    """``int (f - g) dx`` or ``int |f - g| dx`` including the far-field correction."""
    if not f.grid.same_as(g.grid):
        raise GridMismatchError("profiles live on different grids")
    diff = f.values - g.values
    _check_finite(diff)
    grid = f.grid
    integrand = np.abs(diff) if absolute else diff
    interior = grid.omega * float(np.dot(grid.trapezoid_weights, integrand))
    tail = _tail_contribution(f, g)
    if absolute:
        tail = abs(tail)
    return interior + tail


def integrate_weighted_difference(f: RadialProfile, g: RadialProfile, weight: np.ndarray,
                                  weight_decay: float) -> float:
    """``int |f - g| w dx`` where ``w ~ r^-weight_decay`` beyond r_max.

    Only far fields that cancel exactly are accepted; anything else is either
    divergent or not certifiable against the interior part.
    """
    if not f.grid.same_as(g.grid):
        raise GridMismatchError("profiles live on different grids")
    diff = np.abs(f.values - g.values)
    _check_finite(diff)
    grid = f.grid
    interior = grid.omega * float(np.dot(grid.trapezoid_weights, diff * weight))
    decay = difference_decay(f.tail, g.tail)
    if math.isinf(decay):
        return interior
    if not tail_integrable(decay, grid.dimension, weight_decay):
        raise DivergentIntegralError(
            f"weighted far-field difference decays like r^-{decay + weight_decay:g} * r^{grid.dimension - 1}; "
            f"the weighted integral diverges in dimension {grid.dimension}"
        )
    raise DivergentIntegralError(
        "weighted far-field contribution cannot be certified below "
        f"{TAIL_CERTIFY_RTOL:g} of the interior part"
    )  # pragma: no cover - unreachable for the c/(k+r^2) family


def radial_derivative(values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Second-order first derivative on the (possibly stretched) grid; zero at r = 0."""
    f = np.asarray(values, dtype=float)
    r = grid.nodes
    h = np.diff(r)
    d = np.empty_like(f)
    hm, hp = h[:-1], h[1:]
    d[1:-1] = (hm**2 * f[2:] - hp**2 * f[:-2] + (hp**2 - hm**2) * f[1:-1]) / (hm * hp * (hm + hp))
    d[0] = 0.0
    # one-sided quadratic through the last three nodes
    a, b = h[-2], h[-1]
    d[-1] = ((2 * b + a) * a * f[-1] - (a + b) ** 2 * f[-2] + b**2 * f[-3]) / (a * b * (a + b))
    return d


def _second_derivative(f: np.ndarray, grid: RadialGrid) -> np.ndarray:
    r = grid.nodes
    h = np.diff(r)
    d2 = np.empty_like(f)
    hm, hp = h[:-1], h[1:]
    d2[1:-1] = 2.0 * (hm * f[2:] - (hm + hp) * f[1:-1] + hp * f[:-2]) / (hm * hp * (hm + hp))
    # even reflection: ghost value f(-r_1) = f(r_1)
    d2[0] = 2.0 * (f[1] - f[0]) / h[0] ** 2
    a, b = h[-2], h[-1]
    d2[-1] = 2.0 * (a * f[-1] - (a + b) * f[-2] + b * f[-3]) / (a * b * (a + b))
    return d2


def radial_laplacian_values(values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    f = np.asarray(values, dtype=float)
    if f.size < 3:
        raise ValueError("the radial Laplacian needs at least 3 nodes")
    r = grid.nodes
    d1 = radial_derivative(f, grid)
    d2 = _second_derivative(f, grid)
    lap = np.empty_like(f)
    lap[1:] = d2[1:] + (grid.dimension - 1) * d1[1:] / r[1:]
    lap[0] = grid.dimension * d2[0]
    return lap


def radial_laplacian(f: RadialProfile) -> RadialProfile:
    """``f'' + (N-1) f'/r`` by central differences; ``N f''(0)`` at the origin."""
    return RadialProfile(f.grid, radial_laplacian_values(f.values, f.grid))


def cell_moments(grid: RadialGrid, power: int, lo: np.ndarray, hi: np.ndarray, f_lo, slope):
    # Gauss-Legendre is exact for the degree power+1 integrand of a linear f
    npts = power // 2 + 2
    x, w = np.polynomial.legendre.leggauss(npts)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    rho = mid[:, None] + half[:, None] * x[None, :]
    fvals = f_lo[:, None] + slope[:, None] * (rho - lo[:, None])
    return half * np.sum(w[None, :] * fvals * rho**power, axis=1)


def cumulative_moment(values, grid: RadialGrid, power: int) -> np.ndarray:
    """``C_j = int_0^{r_j} f(rho) rho^power drho`` for the piecewise-linear interpolant of ``values``."""
    f = np.asarray(values, dtype=float)
    r = grid.nodes
    slope = np.diff(f) / grid.spacing
    cells = cell_moments(grid, power, r[:-1], r[1:], f[:-1], slope)
    return np.concatenate(([0.0], np.cumsum(cells)))


def ball_integral(values, grid: RadialGrid, radius: float) -> float:
    """``int_{B_radius} f dx`` for the piecewise-linear interpolant of the nodal values."""
    if radius > grid.r_max * (1 + 1e-12):
        raise ValueError(f"ball radius {radius} exceeds the grid (r_max={grid.r_max})")
    f = np.asarray(values, dtype=float)
    n = grid.dimension
    cum = cumulative_moment(f, grid, n - 1)
    j = int(np.searchsorted(grid.nodes, radius, side="right")) - 1
    j = min(j, grid.size - 1)
    total = cum[j]
    if j < grid.size - 1 and radius > grid.nodes[j]:
        a, b = grid.nodes[j], grid.nodes[j + 1]
        slope = (f[j + 1] - f[j]) / (b - a)
        total += cell_moments(grid, n - 1, np.array([a]), np.array([radius]),
                               np.array([f[j]]), np.array([slope]))[0]
    return grid.omega * float(total)
