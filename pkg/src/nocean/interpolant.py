"""Spatial observation operator: lattice observation masks and the
flood-fill global extension.

Observations live on a sparse lattice with spacing delta (in cell lengths);
flood_fill propagates them outward one graph-distance ring per iteration,
averaging over the neighbors assigned in the previous ring when several
reach the same cell. The whole pipeline is linear in the observed values and
keeps observed cells bit-exact.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _kernels as K
from .errors import DeltaTooLarge, EmptyMask, UnreachableCell, ValidationError

DEFAULT_DELTA_MAX = 3


@dataclass(frozen=True)
class ObsMask:
    delta: int
    selected: np.ndarray                     # (ny, nx) bool, ocean-and-region lattice
    region: Optional[Tuple[int, int, int, int]] = None  # (i0, i1, j0, j1) half-open

    @property
    def n_selected(self):
        return int(self.selected.sum())


def _lattice(ny, nx, delta):
    step = delta + 1
    jj = (np.arange(ny) % step == 0)[:, None]
    ii = (np.arange(nx) % step == 0)[None, :]
    return jj & ii


def build_obs_mask(grid, delta, region=None, delta_max=DEFAULT_DELTA_MAX):
    """Observation lattice at spacing delta intersected with ocean and an
    optional rectangular region; delta = 0 selects every ocean cell."""
    delta = int(delta)
    if delta < 0:
        raise ValidationError("delta must be >= 0")
    if delta > delta_max:
        raise DeltaTooLarge(f"delta = {delta} exceeds delta_max = {delta_max}")
    sel = _lattice(grid.ny, grid.nx, delta) & grid.mask
    if region is not None:
        i0, i1, j0, j1 = region
        box = np.zeros_like(sel)
        box[j0:j1, i0:i1] = True
        sel &= box
    if not sel.any():
        raise EmptyMask("no ocean cell falls on the observation lattice")
    sel = sel.copy()
    sel.flags.writeable = False
    return ObsMask(delta=delta, selected=sel, region=region)


def face_selection(grid, mask):
    """Observation lattice carried onto the u/v face lattices (edge mode)."""
    lat = _lattice(grid.ny, grid.nx, mask.delta)
    if mask.region is not None:
        i0, i1, j0, j1 = mask.region
        box = np.zeros_like(lat)
        box[j0:j1, i0:i1] = True
        lat = lat & box
    return lat & grid.umask_b, lat & grid.vmask_b


def _smooth(grid, filled, seeded, n_sweeps):
    """Jacobi averaging sweeps over unobserved ocean cells."""
    px, py = grid.periodic_x, grid.periodic_y
    for _ in range(n_sweeps):
        vals = filled * grid.cmask
        wsum = (_roll(vals, px, py, 0, -1) + _roll(vals, px, py, 0, 1)) + (
            _roll(vals, px, py, -1, 0) + _roll(vals, px, py, 1, 0))
        wcnt = (_roll(grid.cmask, px, py, 0, -1) + _roll(grid.cmask, px, py, 0, 1)) + (
            _roll(grid.cmask, px, py, -1, 0) + _roll(grid.cmask, px, py, 1, 0))
        avg = wsum / np.maximum(wcnt, 1.0)
        filled = np.where(seeded | ~grid.mask, filled, avg)
    return filled


def _roll(a, px, py, dj, di):
    """Neighbor value at (j+dj, i+di), zero outside non-periodic edges."""
    if di:
        if px:
            return np.roll(a, -di, axis=1)
        out = np.zeros_like(a)
        if di < 0:
            out[:, 1:] = a[:, :-1]
        else:
            out[:, :-1] = a[:, 1:]
        return out
    if py:
        return np.roll(a, -dj, axis=0)
    out = np.zeros_like(a)
    if dj < 0:
        out[1:, :] = a[:-1, :]
    else:
        out[:-1, :] = a[1:, :]
    return out


def flood_fill(grid, mask, obs_values, n_smooth=0, domain=None, selected=None,
               return_levels=False):
    """Extend observed values to every cell of the (connected) domain.

    obs_values is a full-shape array read only on the selected cells. The
    optional domain/selected override supports filling on face lattices.
    """
    dom = grid.mask if domain is None else domain
    sel = mask.selected if selected is None else selected
    vals = np.asarray(obs_values, dtype=np.float64)
    filled, complete, levels = K.flood_fill(vals, sel, dom,
                                            grid.periodic_x, grid.periodic_y)
    if not complete:
        raise UnreachableCell("flood fill could not reach every domain cell")
    if n_smooth > 0:
        filled = _smooth(grid, filled, sel, n_smooth)
    if return_levels:
        return filled, levels
    return filled


def faces_to_centers(grid, u, v):
    """Two-point average of face velocities onto cell centers (per layer)."""
    px, py = grid.periodic_x, grid.periodic_y
    uc = np.empty_like(u)
    vc = np.empty_like(v)
    for k in range(u.shape[0]):
        uc[k] = K.avg_u_to_c(u[k], px) * grid.cmask
        vc[k] = K.avg_v_to_c(v[k], py) * grid.cmask
    return uc, vc


def centers_to_faces(grid, uc, vc):
    """Two-point average of center velocities back onto active faces."""
    px, py = grid.periodic_x, grid.periodic_y
    u = np.empty_like(uc)
    v = np.empty_like(vc)
    for k in range(uc.shape[0]):
        u[k] = K.avg_c_to_u(uc[k], px) * grid.umask
        v[k] = K.avg_c_to_v(vc[k], py) * grid.vmask
    return u, v


def interpolate_state(grid, mask, fields, edge_based=False, n_smooth=0):
    """Apply the flood-fill extension per field and layer.

    Center mode expects {"uc", "vc", "theta", "sal"} (center-sampled
    velocities); edge mode expects {"u", "v", "theta", "sal"} with face
    velocities observed directly. Returns face velocities plus center
    tracers: {"u", "v", "theta", "sal"}.
    """
    nz = grid.nz
    out = {}
    for name in ("theta", "sal"):
        if name not in fields:
            continue
        src = fields[name]
        dst = np.empty_like(src)
        for k in range(nz):
            dst[k] = flood_fill(grid, mask, src[k], n_smooth) * grid.cmask
        out[name] = dst

    if edge_based:
        sel_u, sel_v = face_selection(grid, mask)
        u = np.empty_like(fields["u"])
        v = np.empty_like(fields["v"])
        for k in range(nz):
            u[k] = flood_fill(grid, mask, fields["u"][k], n_smooth,
                              domain=grid.umask_b, selected=sel_u) * grid.umask
            v[k] = flood_fill(grid, mask, fields["v"][k], n_smooth,
                              domain=grid.vmask_b, selected=sel_v) * grid.vmask
        out["u"], out["v"] = u, v
    else:
        uc = np.empty_like(fields["uc"])
        vc = np.empty_like(fields["vc"])
        for k in range(nz):
            uc[k] = flood_fill(grid, mask, fields["uc"][k], n_smooth) * grid.cmask
            vc[k] = flood_fill(grid, mask, fields["vc"][k], n_smooth) * grid.cmask
        out["u"], out["v"] = centers_to_faces(grid, uc, vc)
    return out
