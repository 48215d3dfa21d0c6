"""Distances between radial profiles."""

from __future__ import annotations

import numpy as np

from ..barenblatt import weight_value
from ..grid import GridMismatchError, RadialProfile, integrate_difference, integrate_weighted_difference


def l1_distance(f: RadialProfile, g: RadialProfile) -> float:
    """``int |f - g| dx`` including the far-field correction."""
    return integrate_difference(f, g, absolute=True)


def weighted_l1_distance(f: RadialProfile, g: RadialProfile, k2: float, N: int) -> float:
    """``int |f - g| B~_k2^alpha dx`` with ``alpha = (N-4)/2``.

    The far field must cancel; a difference of two Barenblatt laws is
    rejected with :class:`~logdiff.grid.DivergentIntegralError`.
    """
    if N < 5:
        raise ValueError(f"the weighted distance is defined for N >= 5, got N={N}")
    if f.grid.dimension != N:
        raise ValueError(f"profiles live in dimension {f.grid.dimension}, not {N}")
    alpha = (N - 4) / 2.0
    w = weight_value(f.grid.nodes, alpha, k2, N)
    # B~^alpha ~ r^-(N-4)
    return integrate_weighted_difference(f, g, w, weight_decay=N - 4.0)


def scheme_l1_distance(f: RadialProfile, g: RadialProfile) -> float:
    """``omega_N sum_i V_i |f_i - g_i|`` over the finite-volume cells of the solver.

    This is the measure the implicit scheme conserves, so discrete solutions
    contract in it exactly; the trapezoid distance agrees to O(h^2).
    """
    if not f.grid.same_as(g.grid):
        raise GridMismatchError("profiles live on different grids")
    grid = f.grid
    return grid.omega * float(np.dot(grid.cell_volumes, np.abs(f.values - g.values)))


def sup_distance(f: RadialProfile, g: RadialProfile) -> float:
    """``max |f - g|`` over the grid nodes."""
    if not f.grid.same_as(g.grid):
        raise GridMismatchError("profiles live on different grids")
    return float(np.max(np.abs(f.values - g.values)))
