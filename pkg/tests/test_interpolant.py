from collections import deque

import numpy as np
import pytest

from nocean.errors import DeltaTooLarge, EmptyMask
from nocean.grid import build_grid
from nocean.interpolant import (ObsMask, build_obs_mask, centers_to_faces,
                                face_selection, faces_to_centers, flood_fill,
                                interpolate_state)


def strip_grid():
    """5 ocean cells in a row embedded in land."""
    mask = np.zeros((5, 5), dtype=bool)
    mask[2, :] = True
    return build_grid(5, 5, 1, 1e4, 1e4, mask, np.where(mask, 1000.0, 0.0))


def test_mask_counts_8x8():
    g = build_grid(8, 8, 1, 1e4, 1e4, periodic_x=True, periodic_y=True)
    assert build_obs_mask(g, 0).n_selected == 64
    assert build_obs_mask(g, 1).n_selected == 16
    assert build_obs_mask(g, 3).n_selected == 4


def test_mask_delta_cap_and_empty():
    g = build_grid(8, 8, 1, 1e4, 1e4)
    with pytest.raises(DeltaTooLarge):
        build_obs_mask(g, 4)
    mask = np.zeros((8, 8), dtype=bool)
    mask[1:3, 1:3] = True  # ocean misses the delta=3 lattice (multiples of 4)
    g2 = build_grid(8, 8, 1, 1e4, 1e4, mask, np.where(mask, 100.0, 0.0))
    with pytest.raises(EmptyMask):
        build_obs_mask(g2, 3)


def test_mask_region_restriction():
    g = build_grid(8, 8, 1, 1e4, 1e4)
    m = build_obs_mask(g, 0, region=(0, 4, 0, 8))
    assert m.n_selected == 32
    assert not m.selected[:, 4:].any()


def test_flood_fill_hand_oracle_strip():
    g = strip_grid()
    sel = np.zeros((5, 5), dtype=bool)
    sel[2, 0] = sel[2, 4] = True
    mask = ObsMask(delta=3, selected=sel)
    vals = np.zeros((5, 5))
    vals[2, 4] = 4.0
    filled, levels = flood_fill(g, mask, vals, return_levels=True)
    assert np.array_equal(filled[2, :], np.array([0.0, 0.0, 2.0, 4.0, 4.0]))
    assert np.array_equal(levels[2, :], np.array([0, 1, 2, 1, 0]))


def test_flood_fill_constant_preserved():
    g = build_grid(16, 16, 1, 1e4, 1e4, "coastline:5", "flat:500")
    mask = build_obs_mask(g, 3)
    vals = np.where(mask.selected, 7.25, 0.0)
    filled = flood_fill(g, mask, vals)
    assert np.all(filled[g.mask] == 7.25)
    assert np.all(filled[~g.mask] == 0.0)


def test_flood_fill_identity_at_delta0():
    g = build_grid(8, 8, 1, 1e4, 1e4)
    mask = build_obs_mask(g, 0)
    rng = np.random.default_rng(0)
    vals = np.where(g.mask, rng.standard_normal((8, 8)), 0.0)
    filled = flood_fill(g, mask, vals)
    assert np.array_equal(filled, vals)


def test_flood_fill_monotone_hull():
    g = build_grid(16, 16, 1, 1e4, 1e4, "coastline:9", "flat:500")
    mask = build_obs_mask(g, 2)
    rng = np.random.default_rng(1)
    vals = np.where(mask.selected, rng.uniform(-3.0, 5.0, (16, 16)), 0.0)
    filled = flood_fill(g, mask, vals)
    lo, hi = vals[mask.selected].min(), vals[mask.selected].max()
    assert filled[g.mask].min() >= lo - 1e-12
    assert filled[g.mask].max() <= hi + 1e-12
    # observed cells keep their values bit-exactly
    assert np.array_equal(filled[mask.selected], vals[mask.selected])


def _bfs_distance(grid, seeds):
    dist = np.full((grid.ny, grid.nx), -1, dtype=int)
    q = deque()
    for j, i in np.argwhere(seeds):
        dist[j, i] = 0
        q.append((i, j))
    while q:
        i, j = q.popleft()
        for i2, j2 in grid.neighbors(i, j):
            if dist[j2, i2] < 0:
                dist[j2, i2] = dist[j, i] + 1
                q.append((i2, j2))
    return dist


def test_fill_radius_matches_graph_distance():
    g = build_grid(16, 16, 1, 1e4, 1e4, "coastline:13", "flat:500")
    mask = build_obs_mask(g, 3)
    vals = np.where(mask.selected, 1.0, 0.0)
    _, levels = flood_fill(g, mask, vals, return_levels=True)
    dist = _bfs_distance(g, mask.selected)
    assert np.array_equal(levels[g.mask], dist[g.mask])


def test_determinism_bitwise():
    g = build_grid(16, 16, 1, 1e4, 1e4, "coastline:2", "flat:500")
    mask = build_obs_mask(g, 2)
    rng = np.random.default_rng(3)
    vals = np.where(mask.selected, rng.standard_normal((16, 16)), 0.0)
    a = flood_fill(g, mask, vals)
    b = flood_fill(g, mask, vals)
    assert np.array_equal(a, b)


def test_interpolate_state_linearity():
    g = build_grid(16, 16, 2, 1e4, 1e4, periodic_x=True, periodic_y=True)
    mask = build_obs_mask(g, 2)
    rng = np.random.default_rng(4)

    def bundle():
        return {name: rng.standard_normal((2, 16, 16))
                for name in ("uc", "vc", "theta", "sal")}

    x, y = bundle(), bundle()
    a, b = 1.7, -0.4
    combo = {k: a * x[k] + b * y[k] for k in x}
    ix = interpolate_state(g, mask, x)
    iy = interpolate_state(g, mask, y)
    ic = interpolate_state(g, mask, combo)
    for k in ic:
        ref = a * ix[k] + b * iy[k]
        np.testing.assert_allclose(ic[k], ref, rtol=1e-13, atol=1e-13)


def test_interpolate_zero_observations():
    g = build_grid(8, 8, 1, 1e4, 1e4)
    mask = build_obs_mask(g, 1)
    fields = {name: np.zeros((1, 8, 8)) for name in ("uc", "vc", "theta", "sal")}
    out = interpolate_state(g, mask, fields)
    for k in out:
        assert np.all(out[k] == 0.0)


def test_edge_mode_identity_on_observed_faces():
    g = build_grid(8, 8, 1, 1e4, 1e4, periodic_x=True, periodic_y=True)
    mask = build_obs_mask(g, 1)
    sel_u, sel_v = face_selection(g, mask)
    rng = np.random.default_rng(5)
    fields = {
        "u": np.where(sel_u, rng.standard_normal((1, 8, 8)), 0.0),
        "v": np.where(sel_v, rng.standard_normal((1, 8, 8)), 0.0),
        "theta": np.zeros((1, 8, 8)),
        "sal": np.zeros((1, 8, 8)),
    }
    out = interpolate_state(g, mask, fields, edge_based=True)
    assert np.array_equal(out["u"][0][sel_u], fields["u"][0][sel_u])
    assert np.array_equal(out["v"][0][sel_v], fields["v"][0][sel_v])


def test_center_face_round_trip_shapes():
    g = build_grid(8, 8, 2, 1e4, 1e4, periodic_x=True, periodic_y=True)
    rng = np.random.default_rng(6)
    u = rng.standard_normal((2, 8, 8))
    v = rng.standard_normal((2, 8, 8))
    uc, vc = faces_to_centers(g, u, v)
    u2, v2 = centers_to_faces(g, uc, vc)
    assert u2.shape == u.shape and v2.shape == v.shape
    # uniform flow survives the round trip exactly
    uu = np.ones((2, 8, 8))
    uc, vc = faces_to_centers(g, uu, 0.0 * uu)
    u3, _ = centers_to_faces(g, uc, vc)
    assert np.allclose(u3, 1.0)
