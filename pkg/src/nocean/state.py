"""Model state and tendency containers."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatch, ThicknessCollapse

FIELDS = ("u", "v", "h", "theta", "sal")


@dataclass
class LayeredState:
    """Per-layer fields at one model time.

    u, v are face velocities (m/s), h layer thickness (m), theta potential
    temperature (degC), sal salinity (PSU); all shaped (nz, ny, nx) and zero
    on land cells/faces.
    """

    u: np.ndarray
    v: np.ndarray
    h: np.ndarray
    theta: np.ndarray
    sal: np.ndarray
    t: float = 0.0

    def copy(self):
        return LayeredState(self.u.copy(), self.v.copy(), self.h.copy(),
                            self.theta.copy(), self.sal.copy(), self.t)

    def check_shapes(self, grid):
        shape = (grid.nz, grid.ny, grid.nx)
        for name in FIELDS:
            if getattr(self, name).shape != shape:
                raise ShapeMismatch(f"{name} has shape {getattr(self, name).shape}, "
                                    f"expected {shape}")


def zeros_state(grid, t=0.0):
    shape = (grid.nz, grid.ny, grid.nx)
    return LayeredState(*(np.zeros(shape) for _ in FIELDS), t=t)


def resting_state(grid, theta_profile=None, sal_profile=None, t=0.0):
    """Motionless state: layers split the local depth evenly, tracers take
    per-layer profile values on ocean cells."""
    state = zeros_state(grid, t)
    state.h[:] = (grid.bottom_depth / grid.nz) * grid.cmask
    for k in range(grid.nz):
        if theta_profile is not None:
            state.theta[k] = theta_profile[k] * grid.cmask
        if sal_profile is not None:
            state.sal[k] = sal_profile[k] * grid.cmask
    return state


def enforce_land(state, grid):
    """Zero all fields on land cells/faces in place."""
    state.u *= grid.umask
    state.v *= grid.vmask
    for name in ("h", "theta", "sal"):
        getattr(state, name)[:] *= grid.cmask
    return state


def check_thickness(state, grid):
    hmin = state.h[:, grid.mask].min() if grid.n_ocean else 1.0
    if hmin <= 0.0:
        raise ThicknessCollapse(
            f"layer thickness reached {hmin:.3e} m at t = {state.t:.1f} s")


@dataclass
class Tendency:
    """Right-hand sides, same shapes and per-second units as the state fields.

    dtheta/dsal are thickness-weighted tendencies divided by h, i.e. the
    phi rate that conserves sum(h*phi) under flux-form transport.
    """

    du: np.ndarray
    dv: np.ndarray
    dh: np.ndarray
    dtheta: np.ndarray
    dsal: np.ndarray


def zero_tendency(grid):
    shape = (grid.nz, grid.ny, grid.nx)
    return Tendency(*(np.zeros(shape) for _ in FIELDS))
