"""Implicit radial solvers for u_t = Δ log u and its self-similar form.

The unknown is ``v = log u``.  Space is discretised with node-centred finite
volumes: the face flux is

    F = r^(N-1) (v_(i+1) - v_i) / h  +  drift * r^N exp((v_i + v_(i+1)) / 2) / (N-2)

with ``drift = 1`` in the self-similar frame and ``0`` in the physical frame,
zero flux at the origin and a Dirichlet value at ``r_max``.  Each implicit
stage is solved by damped Newton iteration with a tridiagonal Jacobian.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.linalg import solve_banded

from .barenblatt import BarenblattSpec, barenblatt_tail, barenblatt_value, rescaled_barenblatt_value
from .grid import RadialGrid, RadialProfile, tail_through
from .transform import Frame

log = logging.getLogger(__name__)

SCHEMES = ("backward_euler", "trbdf2")
_GAMMA = 2.0 - math.sqrt(2.0)


class SolverError(RuntimeError):
    pass


class NewtonFailure(SolverError):
    """Newton iteration did not reach the residual tolerance."""


class NearExtinction(SolverError):
    """A node (or the boundary datum) fell below the positivity floor."""

    def __init__(self, clock: float, message: str):
        super().__init__(message)
        self.clock = clock


class FatalInvariantViolation(SolverError):
    """Raised by a monitor to stop an evolution."""


@dataclass(frozen=True)
class PinnedBarenblatt:
    """Dirichlet datum taken from the Barenblatt solution with parameter ``k``."""

    k: float


@dataclass(frozen=True)
class FittedTail:
    """Dirichlet datum from a ``c/(k+r^2)`` law fitted to the outer nodes each step."""

    fraction: float = 0.1


Boundary = Union[PinnedBarenblatt, FittedTail]


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    frame: Frame
    boundary: Boundary
    newton_tol: float = 1e-10
    newton_max_iter: int = 50
    positivity_floor: float = 1e-30
    scheme: str = "backward_euler"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (self.newton_tol > 0 and self.positivity_floor > 0):
            raise ValueError("tolerances must be positive")
        if self.newton_max_iter < 1:
            raise ValueError("newton_max_iter must be at least 1")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")


@dataclass(frozen=True)
class EvolutionState:
    profile: RadialProfile
    clock: float
    step_count: int = 0
    frame: Optional[Frame] = None

    def __post_init__(self):
        if not math.isfinite(self.clock):
            raise ValueError("clock must be finite")
        if np.any(~(self.profile.values > 0.0)):
            raise ValueError("evolution states must be strictly positive at every node")


# ---------------------------------------------------------------------------
# discrete operator


@dataclass(frozen=True, eq=False)
class _Operator:
    grid: RadialGrid
    drift: float

    @property
    def volumes(self):
        return self.grid.cell_volumes[:-1]

    def _face_terms(self):
        g = self.grid
        n = g.dimension
        rf = g.faces
        diff = rf ** (n - 1) / g.spacing
        adv = self.drift * rf**n / (n - 2)
        return diff, adv

    def divergence(self, v: np.ndarray):
        """Net flux ``F_(i+1/2) - F_(i-1/2)`` for the interior cells and its Jacobian bands."""
        diff, adv = self._face_terms()
        # geometric face mean of u keeps the discrete steady state close to B~_k
        u_face = np.exp(0.5 * (v[1:] + v[:-1]))
        flux = diff * (v[1:] - v[:-1]) + adv * u_face
        m = v.size - 1
        div = flux.copy()
        div[1:] -= flux[:-1]
        # dF_(i+1/2)/dv_i and dF_(i+1/2)/dv_(i+1)
        d_left = -diff + 0.5 * adv * u_face
        d_right = diff + 0.5 * adv * u_face
        diag = d_left.copy()
        diag[1:] -= d_right[:-1]
        upper = d_right[:-1]          # d div_i / d v_(i+1), i = 0..m-2
        lower = -d_left[:m - 1]        # d div_(i+1) / d v_i
        return div, diag, upper, lower


def _solve_stage(op: _Operator, v_guess: np.ndarray, boundary_v: float, theta: float,
                 rhs: np.ndarray, config: SolverConfig) -> np.ndarray:
    """Solve ``V e^v - theta * div(v) = rhs`` for the interior unknowns."""
    vol = op.volumes
    v = v_guess.copy()
    v[-1] = boundary_v
    scale = vol * np.exp(v[:-1])
    res_norm = math.inf
    for it in range(config.newton_max_iter):
        u = np.exp(v[:-1])
        div, diag, upper, lower = op.divergence(v)
        res = vol * u - theta * div - rhs
        scale = vol * u
        res_norm = float(np.max(np.abs(res) / scale))
        if not math.isfinite(res_norm):
            break
        if res_norm < config.newton_tol:
            return v
        m = v.size - 1
        ab = np.zeros((3, m))
        ab[0, 1:] = -theta * upper
        ab[1, :] = vol * u - theta * diag
        ab[2, :-1] = -theta * lower
        try:
            dv = solve_banded((1, 1), ab, -res)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NewtonFailure(f"singular Newton system: {exc}") from exc
        if not np.all(np.isfinite(dv)):
            break
        big = float(np.max(np.abs(dv)))
        if big < config.newton_tol:
            # update below tolerance: the residual sits on its roundoff floor
            v[:-1] += dv
            return v
        lam = min(1.0, 2.0 / big) if big > 0 else 1.0
        # backtracking on the scaled residual
        for _ in range(8):
            trial = v.copy()
            trial[:-1] += lam * dv
            ut = np.exp(trial[:-1])
            dt_, *_ = op.divergence(trial)
            rt = float(np.max(np.abs(vol * ut - theta * dt_ - rhs) / (vol * ut)))
            if math.isfinite(rt) and (rt < res_norm or lam < 1e-3):
                break
            lam *= 0.5
        v = trial
    raise NewtonFailure(
        f"Newton did not converge in {config.newton_max_iter} iterations (residual {res_norm:.3e})"
    )


def _fit_tail(profile: RadialProfile, fraction: float):
    """Least-squares ``1/u = k/c + r^2/c`` on the outer ``fraction`` of the nodes."""
    r = profile.grid.nodes
    n_fit = max(3, int(math.ceil(fraction * r.size)))
    rr = r[-n_fit:] ** 2
    w = 1.0 / profile.values[-n_fit:]
    slope, intercept = np.polyfit(rr, w, 1)
    if slope <= 0.0:
        raise SolverError("fitted far-field law is not of the form c/(k+r^2) with c > 0")
    c = 1.0 / slope
    return c, intercept * c


def boundary_value(profile: RadialProfile, start: float, clock: float, config: SolverConfig) -> float:
    """Dirichlet datum at ``r_max`` for the step from ``start`` to ``clock``."""
    frame = config.frame
    r_max = profile.grid.r_max
    n = frame.N
    bc = config.boundary
    if isinstance(bc, PinnedBarenblatt):
        if frame.is_physical:
            return float(barenblatt_value(r_max, clock, BarenblattSpec(bc.k, frame.T, n)))
        return float(rescaled_barenblatt_value(r_max, bc.k, n))
    c, k = _fit_tail(profile, bc.fraction)
    if not frame.is_physical:
        return c / (k + r_max**2)
    # read the fitted law as a Barenblatt tail 2(N-2) tau / (k_b tau^(-2/(N-2)) + r^2)
    tau = c / (2.0 * (n - 2))
    if k <= 0.0:
        raise SolverError("fitted far-field law has non-positive k")
    k_b = k * tau ** (2.0 / (n - 2))
    return float(barenblatt_value(r_max, clock, BarenblattSpec(k_b, start + tau, n)))


def _new_tail(values: np.ndarray, grid: RadialGrid, clock: float, config: SolverConfig, old_tail):
    frame = config.frame
    n = frame.N
    bc = config.boundary
    if isinstance(bc, PinnedBarenblatt):
        if frame.is_physical:
            return barenblatt_tail(clock, BarenblattSpec(bc.k, frame.T, n))
        return 2.0 * (n - 2), bc.k
    c = old_tail[0] if old_tail is not None else 2.0 * (n - 2)
    tail = tail_through(c, grid.r_max, values[-1])
    return tail if tail[1] > 0.0 else None


def step(state: EvolutionState, config: SolverConfig, dt: Optional[float] = None) -> EvolutionState:
    """Advance one implicit step of size ``dt`` (default ``config.dt``)."""
    dt = config.dt if dt is None else dt
    profile = state.profile
    grid = profile.grid
    frame = config.frame
    if grid.dimension != frame.N:
        raise ValueError("grid dimension differs from the frame dimension")
    op = _Operator(grid, 0.0 if frame.is_physical else 1.0)
    new_clock = state.clock + dt
    v_old = np.log(profile.values)
    u_old = profile.values[:-1]
    vol = op.volumes

    def datum(clock):
        value = boundary_value(profile, state.clock, clock, config)
        if not value > config.positivity_floor:
            raise NearExtinction(clock, f"boundary datum {value!r} at clock {clock} is below the floor")
        return math.log(value)

    if config.scheme == "backward_euler":
        v = _solve_stage(op, v_old, datum(new_clock), dt, vol * u_old, config)
    else:
        g = _GAMMA
        div_old = op.divergence(v_old)[0]
        rhs1 = vol * u_old + 0.5 * g * dt * div_old
        v_star = _solve_stage(op, v_old, datum(state.clock + g * dt), 0.5 * g * dt, rhs1, config)
        u_star = np.exp(v_star[:-1])
        a = 1.0 / (g * (2.0 - g))
        b = (1.0 - g) ** 2 / (g * (2.0 - g))
        rhs2 = vol * (a * u_star - b * u_old)
        if np.any(rhs2 <= 0.0):
            raise NewtonFailure("TR-BDF2 second stage has a non-positive right-hand side")
        v = _solve_stage(op, v_star, datum(new_clock), (1.0 - g) / (2.0 - g) * dt, rhs2, config)

    u = np.exp(v)
    if np.any(u < config.positivity_floor):
        raise NearExtinction(new_clock, f"solution fell below {config.positivity_floor:g} at clock {new_clock}")
    tail = _new_tail(u, grid, new_clock, config, profile.tail)
    new_profile = RadialProfile(grid, u, tail)
    return EvolutionState(new_profile, new_clock, state.step_count + 1, frame)


# ---------------------------------------------------------------------------
# time loop

RECORD_FIELDS = (
    "clock", "dt_used", "l1_dist", "weighted_l1_dist", "sup_dist",
    "sandwich_margin_low", "sandwich_margin_high", "mass_mismatch",
    "ab_violation", "coeff_bound_margin",
)

Monitor = Callable[[EvolutionState, EvolutionState, float], Dict[str, Optional[float]]]


@dataclass
class DiagnosticsSeries:
    """Per-step records of the monitored quantities (``None`` = not applicable)."""

    records: List[Dict[str, Optional[float]]] = field(default_factory=list)
    extinction_clock: Optional[float] = None
    halvings: int = 0

    def append(self, record: Dict[str, Optional[float]]):
        clock = record["clock"]
        if self.records and not clock > self.records[-1]["clock"]:
            raise ValueError("diagnostic clocks must be strictly increasing")
        full = {name: None for name in RECORD_FIELDS}
        full.update(record)
        for name in ("l1_dist", "weighted_l1_dist", "sup_dist"):
            if full[name] is not None and full[name] < 0:
                raise ValueError(f"{name} must be non-negative")
        self.records.append(full)

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([np.nan if rec[name] is None else rec[name] for rec in self.records])

    @property
    def clocks(self) -> np.ndarray:
        return self.column("clock")


MAX_HALVINGS = 10
EASY_STEPS_BEFORE_GROWTH = 5


def evolve(initial: EvolutionState, config: SolverConfig, horizon: float,
           monitors: Sequence[Monitor] = ()):
    """Step from ``initial.clock`` to ``horizon`` and record one diagnostics row per accepted step.

    Newton failures halve the step (at most ``MAX_HALVINGS`` times in a row);
    after ``EASY_STEPS_BEFORE_GROWTH`` clean steps it doubles again, never past
    ``config.dt``.  A near-extinction signal ends the run early and is stored in
    ``DiagnosticsSeries.extinction_clock``.
    """
    if horizon < initial.clock:
        raise ValueError("horizon lies before the initial clock")
    series = DiagnosticsSeries()
    state = initial
    dt = config.dt
    easy = 0
    halvings = 0
    while horizon - state.clock > 1e-12 * max(1.0, abs(horizon)):
        h = min(dt, horizon - state.clock)
        try:
            new_state = step(state, config, h)
        except NewtonFailure as exc:
            halvings += 1
            series.halvings += 1
            if halvings > MAX_HALVINGS:
                raise SolverError(
                    f"persistent Newton failure at clock {state.clock} after {MAX_HALVINGS} halvings"
                ) from exc
            dt = 0.5 * h
            if dt < config.dt * 0.5 ** MAX_HALVINGS:
                raise SolverError(f"step size collapsed below {dt:.3e} at clock {state.clock}") from exc
            easy = 0
            log.debug("halving dt to %g at clock %g", dt, state.clock)
            continue
        except NearExtinction as exc:
            series.extinction_clock = exc.clock
            log.info("near-extinction signal at clock %g", exc.clock)
            break
        halvings = 0
        if abs(horizon - new_state.clock) <= 1e-12 * max(1.0, abs(horizon)):
            new_state = replace(new_state, clock=horizon)
        record = {"clock": new_state.clock, "dt_used": h}
        for monitor in monitors:
            record.update(monitor(state, new_state, h))
        series.append(record)
        state = new_state
        easy += 1
        if easy >= EASY_STEPS_BEFORE_GROWTH and dt < config.dt:
            dt = min(2.0 * dt, config.dt)
            easy = 0
    return state, series


# ---------------------------------------------------------------------------
# frozen-coefficient linear step


def solve_dirichlet_frozen(coefficient: RadialProfile, p: RadialProfile, dt: float,
                           growth_bounds, boundary: float = 0.0) -> RadialProfile:
    """One implicit step of ``p_s = Δ(a p) + div(x p)/(N-2)`` with ``p(r_max) = boundary``.

    Same finite-volume stencil as the nonlinear scheme, with the drift face
    value taken as the arithmetic mean of ``p``.  The difference of two
    discrete solutions therefore obeys it only up to O(h^2), because the
    nonlinear scheme uses a geometric face mean.
    ``growth_bounds = (C1, C2)`` must satisfy ``C1 (1 + r^2) <= a <= C2 (1 + r^2)``.
    """
    grid = p.grid
    if not coefficient.grid.same_as(grid):
        raise ValueError("coefficient and data live on different grids")
    a = coefficient.values
    c1, c2 = growth_bounds
    quad = 1.0 + grid.nodes**2
    tol = 1e-12
    if np.any(a < c1 * quad * (1 - tol)) or np.any(a > c2 * quad * (1 + tol)):
        worst = max(float(np.max(a / (c2 * quad))), float(np.max(c1 * quad / a)))
        raise ValueError(f"coefficient violates the quadratic growth bounds (worst ratio {worst:.3g})")
    n = grid.dimension
    rf = grid.faces
    diff = rf ** (n - 1) / grid.spacing
    adv = rf**n / (2.0 * (n - 2))
    vol = grid.cell_volumes[:-1]
    m = grid.size - 1
    # F_(i+1/2) = diff (a_(i+1) q_(i+1) - a_i q_i) + adv (q_i + q_(i+1))
    d_left = -diff * a[:-1] + adv
    d_right = diff * a[1:] + adv
    diag = d_left.copy()
    diag[1:] -= d_right[:-1]
    ab = np.zeros((3, m))
    ab[0, 1:] = -dt * d_right[:-1]
    ab[1, :] = vol - dt * diag
    ab[2, :-1] = dt * d_left[:m - 1]
    rhs = vol * p.values[:-1]
    rhs[-1] += dt * d_right[-1] * boundary
    q = solve_banded((1, 1), ab, rhs)
    return RadialProfile(grid, np.concatenate((q, [boundary])))


def frozen_flux_balance(coefficient: RadialProfile, p_new: RadialProfile) -> float:
    """Boundary flux ``F_(M-1/2)`` of the linear operator (summation-by-parts check)."""
    grid = p_new.grid
    n = grid.dimension
    rf = grid.faces[-1]
    a = coefficient.values
    q = p_new.values
    h = grid.spacing[-1]
    return rf ** (n - 1) * (a[-1] * q[-1] - a[-2] * q[-2]) / h + rf**n * (q[-1] + q[-2]) / (2.0 * (n - 2))
