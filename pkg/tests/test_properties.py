import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logdiff.analysis import l1_distance, mean_value_coefficient
from logdiff.barenblatt import BarenblattSpec, rescale_identity_check, rescaled_barenblatt_value
from logdiff.grid import RadialProfile, integrate_difference, make_grid

GRID = make_grid(15.0, 120, 1.0, 3)
ks = st.floats(0.1, 10.0)
amps = st.floats(-0.5, 0.5)


def _profile(k, amp, shift):
    r = GRID.nodes
    vals = rescaled_barenblatt_value(r, k, 3) * (1 + amp * np.exp(-(r - shift) ** 2))
    return RadialProfile(GRID, vals, (2.0, k))


profiles = st.builds(_profile, ks, amps, st.floats(0.0, 10.0))


@given(profiles, profiles)
def test_integrate_difference_antisymmetric(f, g):
    assert integrate_difference(f, g) == pytest.approx(-integrate_difference(g, f), rel=1e-12, abs=1e-12)


@given(profiles, profiles)
def test_l1_symmetric_nonnegative(f, g):
    d = l1_distance(f, g)
    assert d >= 0.0 and d == pytest.approx(l1_distance(g, f), rel=1e-12, abs=1e-12)


@given(profiles, profiles, profiles)
def test_l1_triangle_inequality(f, g, h):
    assert l1_distance(f, h) <= l1_distance(f, g) + l1_distance(g, h) + 1e-9


@given(st.lists(st.floats(1e-3, 1e3), min_size=34, max_size=34))
def test_coefficient_between_reciprocals(vals):
    u = np.array(vals[:17])
    v = np.array(vals[17:])
    g = make_grid(1.0, 16)
    a = mean_value_coefficient(RadialProfile(g, u), RadialProfile(g, v)).values
    lo, hi = 1.0 / np.maximum(u, v), 1.0 / np.minimum(u, v)
    assert np.all(a >= lo * (1 - 1e-12)) and np.all(a <= hi * (1 + 1e-12))


@settings(max_examples=30)
@given(ks, st.floats(0.1, 5.0), st.sampled_from([3, 4, 5, 7]), st.floats(0.0, 0.99))
def test_rescale_identity(k, T, N, frac):
    grid = make_grid(10.0, 50, 1.0, N)
    spec = BarenblattSpec(k, T, N)
    scale = rescaled_barenblatt_value(0.0, k, N)
    assert rescale_identity_check(spec, frac * T, grid) <= 1e-12 * scale


@given(ks, ks, st.floats(0.0, 100.0), st.sampled_from([3, 5, 6]))
def test_barenblatt_ordering_in_k(k1, k2, r, N):
    lo, hi = sorted((k1, k2))
    assert rescaled_barenblatt_value(r, hi, N) <= rescaled_barenblatt_value(r, lo, N)
    assert math.isfinite(rescaled_barenblatt_value(r, lo, N))
