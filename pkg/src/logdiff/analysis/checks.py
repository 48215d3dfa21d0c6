"""Post-run checks over a diagnostics series and over solution snapshots."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..grid import GridMismatchError, RadialProfile, ball_integral
from ..solver import DiagnosticsSeries, EvolutionState

CONTRACTION_RTOL = 1e-8
MODES = ("plain_l1", "weighted_l1")


@dataclass
class ContractionReport:
    mode: str
    column: str
    passed: bool
    nonincreasing: bool
    strictly_decreasing: bool
    max_relative_increase: float
    failures: List[str] = field(default_factory=list)
    checkpoint_clocks: List[float] = field(default_factory=list)
    checkpoint_ratios: List[float] = field(default_factory=list)
    # weighted mode: smallest C with dist(s) <= dist(s0) + C (s - s0)
    required_constant: Optional[float] = None
    fitted_constant: Optional[float] = None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _checkpoints(clocks: np.ndarray, values: np.ndarray, spacing: float):
    """Values at ``s0, s0 + spacing, ...`` (nearest record), with ``s0`` the first record."""
    out_clocks, out_values = [], []
    target = clocks[0]
    while target <= clocks[-1] + 1e-9 * spacing:
        i = int(np.argmin(np.abs(clocks - target)))
        if abs(clocks[i] - target) <= 0.5 * spacing:
            out_clocks.append(float(clocks[i]))
            out_values.append(float(values[i]))
        target += spacing
    return out_clocks, out_values


def check_contraction(series: DiagnosticsSeries, mode: str = "plain_l1", column: Optional[str] = None,
                      rtol: float = CONTRACTION_RTOL, checkpoint_spacing: float = 1.0) -> ContractionReport:
    """Monotonicity of a distance column.

    ``plain_l1`` passes iff every step satisfies ``d_(i+1) <= d_i (1 + rtol)``
    and the distance strictly drops between checkpoints ``checkpoint_spacing``
    apart.  ``weighted_l1`` passes iff the checkpoint drops are strict; the
    per-step behaviour and the growth constant are reported only.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if len(series) == 0:
        raise ValueError("cannot check an empty diagnostics series")
    column = column or ("l1_dist" if mode == "plain_l1" else "weighted_l1_dist")
    d = series.column(column)
    clocks = series.clocks
    if np.any(np.isnan(d)):
        raise ValueError(f"column {column} has missing entries")
    failures = []
    max_inc = 0.0
    for i in range(1, d.size):
        inc = d[i] - d[i - 1]
        rel = inc / d[i - 1] if d[i - 1] > 0 else (math.inf if inc > 0 else 0.0)
        max_inc = max(max_inc, rel)
        if d[i] > d[i - 1] * (1.0 + rtol):
            failures.append(f"step {i} (clock {clocks[i]:.6g}): {column} rose from {d[i-1]!r} to {d[i]!r}")
    nonincreasing = not failures
    ck_clocks, ck_values = _checkpoints(clocks, d, checkpoint_spacing)
    ratios = []
    strict = True
    for prev, cur, c in zip(ck_values[:-1], ck_values[1:], ck_clocks[1:]):
        if prev == 0.0 and cur == 0.0:
            ratios.append(0.0)
            continue
        ratio = cur / prev if prev > 0 else math.inf
        ratios.append(ratio)
        if not ratio < 1.0:
            strict = False
            failures.append(f"no strict decrease at checkpoint clock {c:.6g} (ratio {ratio:.6g})")
    report = ContractionReport(
        mode=mode, column=column, passed=False, nonincreasing=nonincreasing,
        strictly_decreasing=strict, max_relative_increase=float(max_inc), failures=failures,
        checkpoint_clocks=ck_clocks, checkpoint_ratios=ratios,
    )
    if mode == "plain_l1":
        report.passed = nonincreasing and strict
    else:
        elapsed = clocks - clocks[0]
        mask = elapsed > 0
        required = float(np.max((d[mask] - d[0]) / elapsed[mask])) if np.any(mask) else 0.0
        report.required_constant = required
        report.fitted_constant = max(0.0, required)
        report.passed = strict
    return report


def check_aronson_benilan(prev: EvolutionState, new: EvolutionState) -> float:
    """``max(0, max_i (u_new - u_prev)/dt - u_new/t_new)`` by backward differencing."""
    for st in (prev, new):
        if st.frame is None or not st.frame.is_physical:
            raise ValueError("the Aronson-Benilan check needs two physical-frame states")
    if prev.frame != new.frame:
        raise ValueError("states come from different frames")
    if not prev.profile.grid.same_as(new.profile.grid):
        raise GridMismatchError("states live on different grids")
    if not (prev.clock >= 0.0 and new.clock > prev.clock):
        raise ValueError("need 0 <= t_prev < t_new")
    dt = new.clock - prev.clock
    u0, u1 = prev.profile.values, new.profile.values
    excess = (u1 - u0) / dt - u1 / new.clock
    return max(0.0, float(np.max(excess)))


@dataclass
class EnvelopeReport:
    clocks: List[float]
    log_min: List[float]
    log_max: List[float]
    bounded: bool
    c1: float
    c2: float
    c3: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def check_envelope(profiles: Sequence[RadialProfile], clocks: Sequence[float], r0: float,
                   f_l1: float) -> EnvelopeReport:
    """Fit ``C1 e^(-C3 e^s |f|) <= u(1+r^2) <= C2 e^(C3 e^s |f|)`` on ``r >= r0``.

    ``C1`` and ``C2`` are taken from the first snapshot; ``C3 >= 0`` is the
    smallest value covering all later ones.  ``bounded`` is false when some
    snapshot touches zero.
    """
    if len(profiles) != len(clocks) or not profiles:
        raise ValueError("need one clock per profile and at least one profile")
    log_min, log_max = [], []
    with np.errstate(divide="ignore"):
        for p in profiles:
            r = p.grid.nodes
            sel = r >= r0
            scaled = p.values[sel] * (1.0 + r[sel] ** 2)
            log_min.append(float(np.log(np.min(scaled))))
            log_max.append(float(np.log(np.max(scaled))))
    bounded = all(math.isfinite(x) for x in log_min + log_max)
    lm, lM = np.array(log_min), np.array(log_max)
    c1, c2 = math.exp(lm[0]) if bounded else 0.0, math.exp(lM[0])
    c3 = 0.0
    if bounded:
        spread = np.maximum(lm[0] - lm, lM - lM[0])
        growth = np.exp(np.asarray(clocks, dtype=float)) * f_l1
        for sp, gr in zip(spread, growth):
            if sp > 0:
                c3 = max(c3, sp / gr if gr > 0 else math.inf)
    else:
        c3 = math.inf
    return EnvelopeReport(list(map(float, clocks)), log_min, log_max, bounded, c1, c2, c3)


@dataclass
class GrowthFit:
    constant: float
    required: float
    constraints: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def estimate_growth_constant(u_series: Sequence[Tuple[float, RadialProfile]],
                             v_series: Sequence[Tuple[float, RadialProfile]],
                             radii: Sequence[float], T: float, delta: float = 0.0) -> GrowthFit:
    """Smallest ``C`` with ``sqrt(int_B_R (u-v)+) <= sqrt(int_B_2R (u0-v0)+) + C R^((N-2)/2) sqrt(T)``.

    Both series are ``(t, profile)`` lists on one grid, the first entry at
    ``t = 0``.  Only times ``t <= T - delta`` enter.  ``required`` may be
    negative when the data allow it; ``constant = max(0, required)``.
    """
    if not u_series or len(u_series) != len(v_series):
        raise ValueError("need two non-empty series of equal length")
    grid = u_series[0][1].grid
    n = grid.dimension
    for R in radii:
        if not R > 0 or 2.0 * R > grid.r_max * (1 + 1e-12):
            raise ValueError(f"ball radius {R} needs 2R <= r_max = {grid.r_max}")
    (t0, u0), (s0, v0) = u_series[0], v_series[0]
    if t0 != 0.0 or s0 != 0.0:
        raise ValueError("both series must start at t = 0")
    pos0 = np.maximum(u0.values - v0.values, 0.0)
    required = -math.inf
    count = 0
    for R in radii:
        start = math.sqrt(max(ball_integral(pos0, grid, min(2.0 * R, grid.r_max)), 0.0))
        scale = R ** ((n - 2) / 2.0) * math.sqrt(T)
        for (t, u), (s, v) in zip(u_series[1:], v_series[1:]):
            if t != s:
                raise ValueError("the two series are sampled at different times")
            if t > T - delta:
                continue
            pos = np.maximum(u.values - v.values, 0.0)
            lhs = math.sqrt(max(ball_integral(pos, grid, R), 0.0))
            required = max(required, (lhs - start) / scale)
            count += 1
    if count == 0:
        required = 0.0
    return GrowthFit(max(0.0, required), required, count)
