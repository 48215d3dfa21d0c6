import math

import numpy as np
import pytest

from logdiff.barenblatt import BarenblattSpec, barenblatt_profile, barenblatt_value, rescaled_barenblatt_profile
from logdiff.grid import RadialProfile, make_grid
from logdiff.initial import smooth_bump
from logdiff.solver import (DiagnosticsSeries, EvolutionState, FatalInvariantViolation, FittedTail,
                            NearExtinction, NewtonFailure, PinnedBarenblatt, SolverConfig, SolverError,
                            evolve, frozen_flux_balance, solve_dirichlet_frozen, step)
from logdiff.transform import Frame

SS3 = Frame("selfsimilar", 1.0, 3)
PH3 = Frame("physical", 1.0, 3)


def _drift(m, k=1.0, scheme="backward_euler"):
    g = make_grid(20.0 * math.sqrt(k), m, 1.0, 3)
    b = rescaled_barenblatt_profile(g, k)
    cfg = SolverConfig(0.05, SS3, PinnedBarenblatt(k), scheme=scheme)
    final, _ = evolve(EvolutionState(b, 0.0, 0, SS3), cfg, 1.0)
    return np.max(np.abs(final.profile.values / b.values - 1))


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(0.0, SS3, PinnedBarenblatt(1.0))
    with pytest.raises(ValueError):
        SolverConfig(0.1, SS3, PinnedBarenblatt(1.0), scheme="euler")
    with pytest.raises(ValueError):
        SolverConfig(0.1, SS3, PinnedBarenblatt(1.0), newton_tol=0.0)


def test_state_must_be_positive():
    g = make_grid(5.0, 32)
    v = np.ones(g.size)
    v[4] = 0.0
    with pytest.raises(ValueError):
        EvolutionState(RadialProfile(g, v), 0.0)


def test_discrete_stationarity_second_order():
    a, b = _drift(200), _drift(400)
    assert b < 1e-3 and a / b > 3.5


def test_trbdf2_stationarity():
    assert _drift(200, scheme="trbdf2") < 2e-3


def _tracking_error(m, dt):
    spec = BarenblattSpec(1.0, 1.0, 3)
    g = make_grid(32.0, m, 1.0, 3)
    cfg = SolverConfig(dt, PH3, PinnedBarenblatt(1.0))
    worst = 0.0

    def mon(prev, new, dt):
        nonlocal worst
        exact = barenblatt_value(g.nodes, new.clock, spec)
        worst = max(worst, float(np.max(np.abs(new.profile.values / exact - 1))))
        return {}

    final, series = evolve(EvolutionState(barenblatt_profile(g, 0.0, spec), 0.0, 0, PH3), cfg, 0.5, [mon])
    assert final.clock == 0.5 and len(series) == round(0.5 / dt)
    return worst


def test_physical_tracking_against_closed_form():
    coarse, fine = _tracking_error(200, 2e-3), _tracking_error(400, 1e-3)
    assert fine < 5e-3 and coarse / fine > 2.5


def test_zero_length_horizon():
    g = make_grid(5.0, 32)
    st = EvolutionState(rescaled_barenblatt_profile(g, 1.0), 2.0)
    final, series = evolve(st, SolverConfig(0.1, SS3, PinnedBarenblatt(1.0)), 2.0)
    assert final is st and len(series) == 0


def test_horizon_before_clock():
    g = make_grid(5.0, 32)
    with pytest.raises(ValueError):
        evolve(EvolutionState(rescaled_barenblatt_profile(g, 1.0), 2.0),
               SolverConfig(0.1, SS3, PinnedBarenblatt(1.0)), 1.0)


def test_newton_failure_and_halving():
    g = make_grid(20.0, 100, 1.0, 3)
    b = rescaled_barenblatt_profile(g, 1.0)
    u0 = b.replace(values=b.values * (1 + 0.5 * smooth_bump(g.nodes, 0.0, 3.0)))
    cfg = SolverConfig(0.5, SS3, PinnedBarenblatt(1.0), newton_max_iter=3)
    with pytest.raises(NewtonFailure):
        step(EvolutionState(u0, 0.0), cfg)
    _, series = evolve(EvolutionState(u0, 0.0), cfg, 1.0)
    assert series.halvings > 0
    assert series.records[-1]["clock"] == 1.0


def test_persistent_newton_failure():
    g = make_grid(20.0, 100, 1.0, 3)
    b = rescaled_barenblatt_profile(g, 1.0)
    u0 = b.replace(values=b.values * (1 + 0.5 * smooth_bump(g.nodes, 0.0, 3.0)))
    cfg = SolverConfig(0.5, SS3, PinnedBarenblatt(1.0), newton_max_iter=1, newton_tol=1e-300)
    with pytest.raises(SolverError):
        evolve(EvolutionState(u0, 0.0), cfg, 1.0)


def test_near_extinction_fires_by_extinction_time():
    g = make_grid(20.0, 200, 1.0, 3)
    spec = BarenblattSpec(1.0, 1.0, 3)
    cfg = SolverConfig(5e-3, PH3, PinnedBarenblatt(1.0))
    with pytest.raises(NearExtinction):
        step(EvolutionState(barenblatt_profile(g, 0.999, spec), 0.999), cfg, 0.01)
    _, series = evolve(EvolutionState(barenblatt_profile(g, 0.0, spec), 0.0), cfg, 1.2)
    assert series.extinction_clock is not None and series.extinction_clock <= 1.0 + 5e-3


def test_fitted_tail_boundary_runs():
    g = make_grid(20.0, 200, 1.0, 3)
    b = rescaled_barenblatt_profile(g, 2.0)
    cfg = SolverConfig(0.05, SS3, FittedTail())
    final, _ = evolve(EvolutionState(b, 0.0), cfg, 0.5)
    assert np.max(np.abs(final.profile.values / b.values - 1)) < 1e-2
    ph = SolverConfig(1e-3, PH3, FittedTail())
    spec = BarenblattSpec(2.0, 1.0, 3)
    final, _ = evolve(EvolutionState(barenblatt_profile(g, 0.0, spec), 0.0), ph, 0.05)
    exact = barenblatt_value(g.nodes, final.clock, spec)
    assert np.max(np.abs(final.profile.values / exact - 1)) < 1e-2


def test_monitor_fatal_violation_stops_run():
    g = make_grid(5.0, 32)

    def bad(prev, new, dt):
        raise FatalInvariantViolation("stop")

    with pytest.raises(FatalInvariantViolation):
        evolve(EvolutionState(rescaled_barenblatt_profile(g, 1.0), 0.0),
               SolverConfig(0.1, SS3, PinnedBarenblatt(1.0)), 1.0, [bad])


def test_diagnostics_series_invariants():
    s = DiagnosticsSeries()
    s.append({"clock": 0.1, "l1_dist": 1.0})
    with pytest.raises(ValueError):
        s.append({"clock": 0.1, "l1_dist": 1.0})
    with pytest.raises(ValueError):
        s.append({"clock": 0.2, "sup_dist": -1.0})
    assert s.records[0]["weighted_l1_dist"] is None
    assert np.isnan(s.column("weighted_l1_dist")[0])


def _frozen_setup():
    g = make_grid(20.0, 400, 1.0, 3)
    a = RadialProfile(g, 1.0 / rescaled_barenblatt_profile(g, 2.0).values)
    return g, a


def test_frozen_step_of_zero_is_zero():
    g, a = _frozen_setup()
    q = solve_dirichlet_frozen(a, RadialProfile(g, np.zeros(g.size)), 0.01, (0.49, 1.01))
    assert np.all(q.values == 0.0)


def test_frozen_step_mass_and_flux_identity():
    g, a = _frozen_setup()
    r = g.nodes
    p = RadialProfile(g, 2 / (1 + r**2) - 2 / (4 + r**2))
    dt = 0.01
    q = solve_dirichlet_frozen(a, p, dt, (0.49, 1.01))
    vol = g.cell_volumes[:-1]
    before, after = np.dot(vol, p.values[:-1]), np.dot(vol, q.values[:-1])
    assert after <= before * (1 + 1e-8)
    # summation by parts: the change is exactly the boundary flux
    assert after - before == pytest.approx(dt * frozen_flux_balance(a, q), rel=1e-9)


def test_frozen_step_rejects_bad_coefficient():
    g, a = _frozen_setup()
    p = RadialProfile(g, np.zeros(g.size))
    with pytest.raises(ValueError):
        solve_dirichlet_frozen(a.replace(values=10 * a.values), p, 0.01, (0.49, 1.01))
