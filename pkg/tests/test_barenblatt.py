import math

import numpy as np
import pytest

from logdiff.barenblatt import (BarenblattSpec, barenblatt_tail, barenblatt_value, drift_diffusion_bound,
                                drift_diffusion_lhs, laplacian_weight_identity, rescale_identity_check,
                                rescaled_barenblatt_profile, rescaled_barenblatt_value, residual_rescaled_pde,
                                weight_value)
from logdiff.grid import RadialProfile, make_grid, radial_laplacian_values


def test_spec_validation():
    for args in [(0.0, 1.0, 3), (1.0, 0.0, 3), (1.0, 1.0, 2), (1.0, 1.0, 3.5)]:
        with pytest.raises(ValueError):
            BarenblattSpec(*args)


def test_barenblatt_values():
    assert barenblatt_value(0.0, 0.0, BarenblattSpec(1, 1, 3)) == 2.0
    assert barenblatt_value(1.0, 0.0, BarenblattSpec(1, 1, 5)) == 3.0
    assert barenblatt_value(3.0, 1.0, BarenblattSpec(2, 1, 4)) == 0.0
    assert barenblatt_value(3.0, 1.0 + 1e-15, BarenblattSpec(2, 1, 4)) == 0.0


def test_barenblatt_continuous_at_extinction():
    spec = BarenblattSpec(1.5, 2.0, 5)
    assert barenblatt_value(0.3, 2.0 - 1e-12, spec) < 1e-11
    assert barenblatt_tail(2.0, spec) is None


def test_barenblatt_decreasing_in_k():
    r = np.linspace(0, 10, 50)
    a = barenblatt_value(r, 0.3, BarenblattSpec(1.0, 1.0, 3))
    b = barenblatt_value(r, 0.3, BarenblattSpec(1.5, 1.0, 3))
    assert np.all(b < a)


def test_rescaled_values():
    assert rescaled_barenblatt_value(0.0, 2.0, 3) == 1.0
    assert rescaled_barenblatt_value(1.0, 1.0, 5) == 3.0
    r = np.linspace(0, 100, 200)
    assert np.all(np.diff(rescaled_barenblatt_value(r, 1.0, 3)) < 0)


def test_tail_matches_closed_form():
    spec = BarenblattSpec(2.0, 1.5, 5)
    c, k = barenblatt_tail(0.4, spec)
    r = np.array([30.0, 100.0])
    np.testing.assert_allclose(c / (k + r**2), barenblatt_value(r, 0.4, spec), rtol=1e-13)


@pytest.mark.parametrize("k,T,N,t", [(1, 1, 3, 0.5), (3, 2, 5, 1.9), (1, 1, 3, 1 - 1e-12), (0.2, 5, 7, -3.0)])
def test_rescale_identity(k, T, N, t):
    grid = make_grid(20.0, 64, 1.0, N)
    assert rescale_identity_check(BarenblattSpec(k, T, N), t, grid) <= 1e-12


def test_rescale_identity_rejects_late_time():
    with pytest.raises(ValueError):
        rescale_identity_check(BarenblattSpec(1, 1, 3), 1.0, make_grid(1.0, 16))


def test_weight_values():
    assert weight_value(0.0, 0.5, 1.0, 5) == pytest.approx(math.sqrt(6))
    assert weight_value(0.0, 2.7, 6.0, 5) == pytest.approx(1.0)
    assert weight_value(3.0, 1.0, 1.0, 5) == pytest.approx(0.6)


def test_laplacian_weight_identity_values():
    assert laplacian_weight_identity(0.0, 1.0, 5) == pytest.approx(-5 * math.sqrt(6))
    r = np.linspace(0, 1e3, 1000)
    for N in (5, 6, 9):
        assert np.all(laplacian_weight_identity(r, 0.7, N) < 0)
    big = 1e4
    lead = -(5 - 4) * 2 / big**2 * weight_value(big, 0.5, 1.0, 5)
    assert laplacian_weight_identity(big, 1.0, 5) == pytest.approx(lead, rel=1e-6)


@pytest.mark.parametrize("fn", [laplacian_weight_identity, drift_diffusion_bound])
def test_weight_identities_reject_low_dimension(fn):
    with pytest.raises(ValueError):
        fn(1.0, 1.0, 4)


def test_drift_diffusion_bound_values():
    assert drift_diffusion_bound(0.0, 1.0, 5) == pytest.approx(-(5 / 6) * math.sqrt(6))
    r = np.linspace(0, 50, 500)
    for N, k in [(5, 0.5), (7, 3.0)]:
        rhs = drift_diffusion_bound(r, k, N)
        assert np.all(rhs < 0)
        np.testing.assert_allclose(drift_diffusion_lhs(r, k, N), rhs, rtol=1e-12)


def test_weight_laplacian_matches_discrete_operator():
    errs = []
    for m in (200, 400):
        g = make_grid(15.0, m, 1.0, 7)
        num = radial_laplacian_values(weight_value(g.nodes, 1.5, 2.0, 7), g)
        errs.append(np.max(np.abs(num - laplacian_weight_identity(g.nodes, 2.0, 7))[:-1]))
    assert errs[0] / errs[1] > 3.5


@pytest.mark.parametrize("k", [1.0, 3.0])
def test_residual_vanishes_at_second_order(k):
    res = []
    for m in (200, 400):
        g = make_grid(10.0, m, 1.0, 3)
        res.append(np.max(np.abs(residual_rescaled_pde(rescaled_barenblatt_profile(g, k)).values[:-1])))
    assert res[0] / res[1] > 3.5


def test_residual_of_wrong_amplitude_does_not_vanish():
    res = []
    for m in (200, 400):
        g = make_grid(10.0, m, 1.0, 3)
        b = rescaled_barenblatt_profile(g, 1.0)
        res.append(np.max(np.abs(residual_rescaled_pde(RadialProfile(g, 2 * b.values)).values)))
    assert res[1] > 0.5 and res[1] > 0.9 * res[0]


def test_residual_rejects_nonpositive():
    g = make_grid(1.0, 16)
    with pytest.raises(ValueError):
        residual_rescaled_pde(RadialProfile(g, np.zeros(g.size)))
