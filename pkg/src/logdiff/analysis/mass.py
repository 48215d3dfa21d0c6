"""Mass matching: the Barenblatt parameter whose difference with u0 has zero integral."""

from __future__ import annotations

from typing import Tuple

from scipy.optimize import bisect

from ..barenblatt import BarenblattSpec, barenblatt_profile
from ..grid import RadialProfile, integrate_difference

MASS_RTOL = 1e-8


class BracketError(ValueError):
    """The bracket does not enclose a sign change of the mass function."""


def mass_function(u0: RadialProfile, k: float, T: float) -> float:
    """``f(k) = int (u0 - B_k(., 0)) dx``; increasing in ``k``."""
    n = u0.grid.dimension
    return integrate_difference(u0, barenblatt_profile(u0.grid, 0.0, BarenblattSpec(k, T, n)))


def match_k0(u0: RadialProfile, T: float, N: int, bracket: Tuple[float, float]) -> float:
    """Root of the mass function inside ``bracket`` (either orientation).

    Stops once ``|f(k0)| < 1e-8 (|f(k_lo)| + |f(k_hi)|)``.
    """
    if N != 3:
        raise ValueError(f"mass matching needs an integrable difference, which holds only for N = 3 (got N={N})")
    if u0.grid.dimension != N:
        raise ValueError("u0 does not live in dimension 3")
    lo, hi = sorted(float(k) for k in bracket)
    if not lo > 0:
        raise BracketError(f"bracket must be positive, got {bracket}")
    f_lo = mass_function(u0, lo, T)
    f_hi = mass_function(u0, hi, T)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(
            f"mass function has the same sign at both ends: f({lo})={f_lo:.6g}, f({hi})={f_hi:.6g}"
        )
    target = MASS_RTOL * (abs(f_lo) + abs(f_hi))
    k0 = bisect(lambda k: mass_function(u0, k, T), lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    residual = mass_function(u0, k0, T)
    if abs(residual) >= target:
        raise ArithmeticError(f"bisection stalled with |f(k0)| = {abs(residual):.3g} >= {target:.3g}")
    return k0
