"""Observation snapshots at fixed intervals with piecewise-linear temporal
interpolation between them.

Snapshots hold exact copies of the reference fields on the observation mask
(center-sampled velocities by default, face velocities in edge mode). A
parallel full-field shadow can be kept so error diagnostics measure true
full-field RMS while the assimilation itself only ever sees mask cells.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import NonUniformTime, OutOfRange, ShapeMismatch
from .interpolant import face_selection, faces_to_centers
from .state import LayeredState

_REL_TOL = 1e-9

OBS_FIELDS_CENTER = ("uc", "vc", "theta", "sal")
OBS_FIELDS_EDGE = ("u", "v", "theta", "sal")


@dataclass
class ObservationStore:
    dt_obs: float
    mask: object                    # ObsMask
    edge_based: bool = False
    store_full: bool = True
    grid_hash: str = ""
    run_id: str = ""
    times: List[float] = field(default_factory=list)
    snapshots: List[dict] = field(default_factory=list)
    full_states: List[LayeredState] = field(default_factory=list)

    @property
    def field_names(self):
        return OBS_FIELDS_EDGE if self.edge_based else OBS_FIELDS_CENTER

    def window(self):
        if not self.times:
            raise OutOfRange("observation store is empty")
        return self.times[0], self.times[-1]


def observe_state(grid, mask, state, edge_based=False):
    """Sample a state on the observation mask; values off-mask are zeroed."""
    out = {}
    if edge_based:
        sel_u, sel_v = face_selection(grid, mask)
        out["u"] = np.where(sel_u, state.u, 0.0)
        out["v"] = np.where(sel_v, state.v, 0.0)
    else:
        uc, vc = faces_to_centers(grid, state.u, state.v)
        out["uc"] = np.where(mask.selected, uc, 0.0)
        out["vc"] = np.where(mask.selected, vc, 0.0)
    out["theta"] = np.where(mask.selected, state.theta, 0.0)
    out["sal"] = np.where(mask.selected, state.sal, 0.0)
    return out


def record_snapshot(store, t, state, grid, mask=None):
    """Append an exact-copy snapshot at t; spacing must equal dt_obs."""
    mask = store.mask if mask is None else mask
    if store.times:
        expected = store.times[-1] + store.dt_obs
        if abs(t - expected) > _REL_TOL * store.dt_obs:
            raise NonUniformTime(
                f"snapshot at t = {t} violates spacing dt_obs = {store.dt_obs} "
                f"(expected t = {expected})")
    store.times.append(float(t))
    store.snapshots.append(observe_state(grid, mask, state, store.edge_based))
    if store.store_full:
        store.full_states.append(state.copy())
    return store


def _locate(store, t):
    t0, t1 = store.window()
    tol = _REL_TOL * store.dt_obs
    if t < t0 - tol or t > t1 + tol:
        raise OutOfRange(f"t = {t} outside stored window [{t0}, {t1}]")
    n = int(round((t - t0) / store.dt_obs))
    n = min(max(n, 0), len(store.times) - 1)
    if abs(t - store.times[n]) <= tol:
        return n, None
    n = int(np.floor((t - t0) / store.dt_obs))
    n = min(max(n, 0), len(store.times) - 2)
    theta = (t - store.times[n]) / store.dt_obs
    return n, theta


def temporal_interp(store, t):
    """Observed field bundle at time t: exact snapshot at nodes, linear
    blend (1-theta)*snap[n] + theta*snap[n+1] in between."""
    n, theta = _locate(store, t)
    if theta is None:
        return {k: v.copy() for k, v in store.snapshots[n].items()}
    a, b = store.snapshots[n], store.snapshots[n + 1]
    w0 = 1.0 - theta
    return {k: w0 * a[k] + theta * b[k] for k in store.field_names}


def temporal_interp_full(store, t):
    """Full-field reference state at t from the shadow store."""
    if not store.store_full:
        raise OutOfRange("store was built without full-field shadows")
    n, theta = _locate(store, t)
    if theta is None:
        return store.full_states[n].copy()
    a, b = store.full_states[n], store.full_states[n + 1]
    w0 = 1.0 - theta
    return LayeredState(
        u=w0 * a.u + theta * b.u,
        v=w0 * a.v + theta * b.v,
        h=w0 * a.h + theta * b.h,
        theta=w0 * a.theta + theta * b.theta,
        sal=w0 * a.sal + theta * b.sal,
        t=float(t),
    )
