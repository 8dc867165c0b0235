import numpy as np
import pytest

from nocean.errors import NonUniformTime, OutOfRange
from nocean.grid import build_grid
from nocean.interpolant import build_obs_mask
from nocean.observations import (ObservationStore, observe_state,
                                 record_snapshot, temporal_interp,
                                 temporal_interp_full)
from nocean.state import zeros_state


def make_setup(delta=0, edge_based=False, dt_obs=21600.0):
    g = build_grid(8, 8, 2, 1e4, 1e4, periodic_x=True, periodic_y=True)
    mask = build_obs_mask(g, delta)
    store = ObservationStore(dt_obs=dt_obs, mask=mask, edge_based=edge_based,
                             grid_hash=g.hash)
    return g, mask, store


def state_with(g, value, t=0.0):
    s = zeros_state(g, t)
    s.u[:] = value * g.umask
    s.v[:] = value * g.vmask
    s.h[:] = 500.0 * g.cmask
    s.theta[:] = value * g.cmask
    s.sal[:] = 35.0 * g.cmask
    s.t = t
    return s


def test_record_counts_and_spacing():
    g, mask, store = make_setup()
    record_snapshot(store, 0.0, state_with(g, 1.0), g)
    assert len(store.times) == 1
    record_snapshot(store, 21600.0, state_with(g, 2.0, 21600.0), g)
    assert len(store.times) == 2
    with pytest.raises(NonUniformTime):
        record_snapshot(store, 21600.0 * 2.5, state_with(g, 3.0), g)


def test_node_exact_and_midpoint():
    g, mask, store = make_setup(dt_obs=21600.0)
    for i, val in enumerate((0.0, 6.0, 12.0)):
        record_snapshot(store, i * 21600.0, state_with(g, val), g)
    node = temporal_interp(store, 2 * 21600.0)
    assert np.array_equal(node["theta"], store.snapshots[2]["theta"])
    mid = temporal_interp(store, 0.5 * 21600.0)
    ocean = g.mask
    np.testing.assert_allclose(mid["theta"][:, ocean], 3.0, rtol=1e-15)


def test_out_of_range():
    g, mask, store = make_setup()
    record_snapshot(store, 0.0, state_with(g, 1.0), g)
    record_snapshot(store, 21600.0, state_with(g, 2.0), g)
    with pytest.raises(OutOfRange):
        temporal_interp(store, 21600.0 * 1.5)


def test_linear_trajectory_reproduced_exactly():
    g, mask, store = make_setup()
    a, b = 3.0, 0.25 / 21600.0
    for i in range(5):
        t = i * 21600.0
        record_snapshot(store, t, state_with(g, a + b * t), g)
    rng = np.random.default_rng(0)
    for t in rng.uniform(0.0, 4 * 21600.0, 20):
        out = temporal_interp(store, t)
        np.testing.assert_allclose(out["theta"][:, g.mask], a + b * t,
                                   rtol=1e-12)


def test_quadratic_interp_error_scales_dt2():
    g = build_grid(8, 8, 1, 1e4, 1e4, periodic_x=True, periodic_y=True)
    mask = build_obs_mask(g, 0)
    omega = 2.0 * np.pi / (4.0 * 86400.0)

    def max_err(dt_obs):
        store = ObservationStore(dt_obs=dt_obs, mask=mask, grid_hash=g.hash)
        n = int(round(2 * 86400.0 / dt_obs))
        for i in range(n + 1):
            t = i * dt_obs
            record_snapshot(store, t, state_with(g, np.sin(omega * t)), g)
        errs = []
        for t in np.linspace(0.0, 2 * 86400.0, 200):
            out = temporal_interp(store, t)
            errs.append(np.abs(out["theta"][:, g.mask] - np.sin(omega * t)).max())
        return max(errs)

    e1 = max_err(21600.0)
    e2 = max_err(10800.0)
    assert 3.0 < e1 / e2 < 5.0  # halving dt_obs quarters the error


def test_full_shadow_round_trip():
    g, mask, store = make_setup()
    s0 = state_with(g, 1.5)
    record_snapshot(store, 0.0, s0, g)
    record_snapshot(store, 21600.0, state_with(g, 2.5, 21600.0), g)
    back = temporal_interp_full(store, 0.0)
    assert np.array_equal(back.u, s0.u)
    mid = temporal_interp_full(store, 10800.0)
    np.testing.assert_allclose(mid.theta[:, g.mask], 2.0, rtol=1e-15)


def test_observe_state_masks_offgrid():
    g = build_grid(8, 8, 1, 1e4, 1e4, periodic_x=True, periodic_y=True)
    mask = build_obs_mask(g, 1)
    s = state_with(g, 2.0)
    out = observe_state(g, mask, s)
    assert np.all(out["theta"][:, ~mask.selected] == 0.0)
    assert np.all(out["theta"][:, mask.selected] == 2.0)
    # center-averaged uniform velocity stays uniform on mask cells
    np.testing.assert_allclose(out["uc"][:, mask.selected], 2.0, rtol=1e-15)
