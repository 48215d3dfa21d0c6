"""Per-step monitors for :func:`logdiff.solver.evolve`.

A monitor is called as ``monitor(prev, new, dt)`` after every accepted step and
returns the diagnostics fields it owns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Union

import numpy as np

from ..barenblatt import BarenblattSpec, barenblatt_profile, rescaled_barenblatt_profile
from ..grid import DivergentIntegralError, RadialProfile, integrate_difference
from ..solver import EvolutionState, FatalInvariantViolation, SolverConfig, step
from ..transform import Frame
from .checks import check_aronson_benilan
from .coefficient import coefficient_bound_margin, mean_value_coefficient
from .norms import l1_distance, scheme_l1_distance, sup_distance, weighted_l1_distance

SANDWICH_ATOL = 1e-6

Reference = Union[RadialProfile, Callable[[float], RadialProfile]]


def barenblatt_reference(grid, k: float, frame: Frame) -> Reference:
    """``B_k(., t)`` in the physical frame, the fixed ``B~_k`` otherwise."""
    if frame.is_physical:
        spec = BarenblattSpec(k, frame.T, frame.N)
        return lambda clock: barenblatt_profile(grid, clock, spec)
    return rescaled_barenblatt_profile(grid, k)


def _resolve(reference: Reference, clock: float) -> RadialProfile:
    return reference(clock) if callable(reference) else reference


@dataclass
class DistanceMonitor:
    """``l1_dist``, ``sup_dist`` and (for ``weight_k2``) ``weighted_l1_dist`` to a reference."""

    reference: Reference
    weight_k2: Optional[float] = None

    def __call__(self, prev, new, dt) -> Dict[str, Optional[float]]:
        ref = _resolve(self.reference, new.clock)
        out: Dict[str, Optional[float]] = {"sup_dist": sup_distance(new.profile, ref)}
        try:
            out["l1_dist"] = l1_distance(new.profile, ref)
        except DivergentIntegralError:
            out["l1_dist"] = None
        if self.weight_k2 is not None:
            try:
                out["weighted_l1_dist"] = weighted_l1_distance(new.profile, ref, self.weight_k2, ref.grid.dimension)
            except DivergentIntegralError:
                out["weighted_l1_dist"] = None
        return out


@dataclass
class MassMonitor:
    """Signed ``int (u - B_k0) dx``; only defined in dimension 3."""

    reference: Reference

    def __call__(self, prev, new, dt):
        ref = _resolve(self.reference, new.clock)
        try:
            return {"mass_mismatch": integrate_difference(new.profile, ref)}
        except DivergentIntegralError:
            return {"mass_mismatch": None}


@dataclass
class SandwichMonitor:
    """Margins ``min(u - B_k1)`` and ``min(B_k2 - u)``; fatal below ``-1e-6 sup B_k2``."""

    k1: float
    k2: float
    frame: Frame
    atol: float = SANDWICH_ATOL
    worst: float = field(default=np.inf, init=False)

    def __call__(self, prev, new, dt):
        grid = new.profile.grid
        low_ref = _resolve(barenblatt_reference(grid, self.k1, self.frame), new.clock)
        high_ref = _resolve(barenblatt_reference(grid, self.k2, self.frame), new.clock)
        u = new.profile.values
        low = float(np.min(u - low_ref.values))
        high = float(np.min(high_ref.values - u))
        limit = -self.atol * float(np.max(high_ref.values))
        self.worst = min(self.worst, low, high)
        if low < limit or high < limit:
            raise FatalInvariantViolation(
                f"sandwich broken at clock {new.clock:.6g}: margins ({low:.3g}, {high:.3g}) below {limit:.3g}"
            )
        return {"sandwich_margin_low": low, "sandwich_margin_high": high}


@dataclass
class AronsonBenilanMonitor:
    def __call__(self, prev, new, dt):
        return {"ab_violation": check_aronson_benilan(prev, new)}


@dataclass
class CompanionMonitor:
    """Evolves a second solution alongside the main one with the same steps.

    Reports the pairwise distance as ``pair_l1_dist`` (trapezoid) and
    ``pair_scheme_l1_dist`` (finite-volume measure) and, for sandwich
    parameters ``k1 > k2``, the margin of the mean-value coefficient inside its
    growth bounds.
    """

    state: EvolutionState
    config: SolverConfig
    k1: Optional[float] = None
    k2: Optional[float] = None

    def __call__(self, prev, new, dt):
        if abs(self.state.clock - prev.clock) > 1e-12 * max(1.0, abs(prev.clock)):
            raise ValueError("companion clock is out of step with the main run")
        nxt = step(self.state, self.config, dt)
        self.state = EvolutionState(nxt.profile, new.clock, nxt.step_count, nxt.frame)
        out = {"pair_l1_dist": l1_distance(new.profile, self.state.profile),
               "pair_scheme_l1_dist": scheme_l1_distance(new.profile, self.state.profile)}
        if self.k1 is not None and self.k2 is not None:
            coef = mean_value_coefficient(new.profile, self.state.profile)
            out["coeff_bound_margin"] = coefficient_bound_margin(coef, self.k1, self.k2)
        return out
