"""Right-hand-side tendencies for the layered rotating shallow-water system
with tracers.

Every momentum/tracer term is gated by its own PhysicsConfig flag so that
term-toggle ablations are exact: a disabled flag contributes nothing, and the
total is accumulated in a fixed canonical term order so single-term runs sum
reproducibly to the full-physics tendency.
"""

from dataclasses import dataclass, fields as dc_fields, replace as dc_replace

import numpy as np

from . import _kernels as K
from .errors import ValidationError
from .state import Tendency, zero_tendency

_EPS_H = 1e-30

# canonical accumulation order for momentum terms
MOMENTUM_TERMS = (
    "coriolis",
    "ke_gradient_and_relative_vorticity",
    "pressure_gradient",
    "vertical_advection",
    "horizontal_mixing",
    "vertical_mixing",
    "bottom_drag",
    "surface_stress",
    "topographic_wave_drag",
    "divergence_damping",
    "momentum_forcing",
)

TRACER_TERMS = (
    "tracer_advection",
    "tracer_horizontal_mixing",
    "tracer_vertical_mixing",
    "tracer_forcing",
)

FLAG_NAMES = MOMENTUM_TERMS + ("thickness_advection",) + TRACER_TERMS


@dataclass(frozen=True)
class PhysicsConfig:
    # term switches
    coriolis: bool = True
    pressure_gradient: bool = True
    ke_gradient_and_relative_vorticity: bool = True
    vertical_advection: bool = True
    horizontal_mixing: bool = True
    vertical_mixing: bool = True
    bottom_drag: bool = True
    surface_stress: bool = True
    topographic_wave_drag: bool = True
    divergence_damping: bool = True
    momentum_forcing: bool = False
    thickness_advection: bool = True
    tracer_advection: bool = True
    tracer_horizontal_mixing: bool = True
    tracer_vertical_mixing: bool = True
    tracer_forcing: bool = True
    # coefficients
    f0: float = 1.0e-4            # 1/s
    beta: float = 2.0e-11         # 1/(m s)
    nu_h: float = 200.0           # m^2/s
    nu_v: float = 1.0e-3          # m^2/s
    kappa_h: float = 50.0         # m^2/s
    kappa_v: float = 1.0e-5       # m^2/s
    c_drag: float = 3.0e-3        # quadratic, dimensionless
    tau_wind: float = 0.1         # N/m^2
    wind_profile: str = "double_gyre"  # or "constant"
    r_twd: float = 1.0e-6         # 1/s
    nu_div: float = 4.2e5         # m^2/s, gravity-wave stabilizer
    g: float = 9.81               # m/s^2
    rho0: float = 1026.0          # kg/m^3
    alpha_T: float = 2.0e-4       # 1/degC
    beta_S: float = 7.6e-4        # 1/PSU
    theta_ref: float = 10.0       # degC
    sal_ref: float = 35.0         # PSU
    theta_restore_base: float = 11.0   # degC, surface restoring midpoint
    theta_restore_range: float = 6.0   # degC, south-to-north drop
    theta_restore_rate: float = 7.7e-7  # 1/s (~15 days)

    def validate(self):
        for name in ("f0", "beta", "nu_h", "nu_v", "kappa_h", "kappa_v",
                     "c_drag", "tau_wind", "r_twd", "nu_div", "alpha_T",
                     "beta_S", "theta_restore_rate"):
            if getattr(self, name) < 0.0:
                raise ValidationError(f"physics.{name} must be >= 0")
        if self.g <= 0.0 or self.rho0 <= 0.0:
            raise ValidationError("physics.g and physics.rho0 must be > 0")
        if self.wind_profile not in ("double_gyre", "constant"):
            raise ValidationError(
                f"physics.wind_profile must be double_gyre|constant, "
                f"got {self.wind_profile!r}")
        if self.tracer_advection and not self.thickness_advection:
            raise ValidationError(
                "tracer_advection requires thickness_advection "
                "(flux-form constancy needs consistent h updates)")
        return self

    def replace(self, **kw):
        return dc_replace(self, **kw)

    def with_flags(self, value):
        return self.replace(**{name: value for name in FLAG_NAMES})

    def with_only(self, *names):
        for n in names:
            if n not in FLAG_NAMES:
                raise ValidationError(f"unknown physics flag {n!r}")
        cfg = self.with_flags(False)
        return cfg.replace(**{name: True for name in names})

    def enabled_flags(self):
        return tuple(n for n in FLAG_NAMES if getattr(self, n))


def config_to_dict(cfg):
    return {f.name: getattr(cfg, f.name) for f in dc_fields(PhysicsConfig)}


def linear_eos(theta, sal, cfg):
    """Linear equation of state; returns rho0 exactly at the reference point."""
    return cfg.rho0 * ((1.0 - cfg.alpha_T * (theta - cfg.theta_ref))
                       + cfg.beta_S * (sal - cfg.sal_ref))


def hydrostatic_pressure(state, cfg, grid, p_surface=0.0):
    """Pressure at layer mid-depth: surface value plus the overlying
    half-layer column weights."""
    rho = linear_eos(state.theta, state.sal, cfg) * grid.cmask
    w = rho * state.h
    above = np.zeros_like(w)
    if grid.nz > 1:
        above[1:] = np.cumsum(w, axis=0)[:-1]
    p = (p_surface + cfg.g * (above + 0.5 * w)) * grid.cmask
    return p


def layer_middepth(state, grid):
    """z of layer midpoints from cumulative thickness; z=0 at the resting
    surface, increasing upward."""
    eta = np.sum(state.h, axis=0) - grid.bottom_depth
    above = np.zeros_like(state.h)
    if grid.nz > 1:
        above[1:] = np.cumsum(state.h, axis=0)[:-1]
    return (eta[None, :, :] - (above + 0.5 * state.h)) * grid.cmask


def thickness_fluxes(state, grid):
    """First-order upwind thickness fluxes (m^2/s) and their divergence."""
    nz = grid.nz
    px, py = grid.periodic_x, grid.periodic_y
    fx = np.empty_like(state.h)
    fy = np.empty_like(state.h)
    divs = np.empty_like(state.h)
    for k in range(nz):
        fx[k] = state.u[k] * K.upwind_to_u(state.h[k], state.u[k], px)
        fy[k] = state.v[k] * K.upwind_to_v(state.h[k], state.v[k], py)
        divs[k] = K.div(fx[k], fy[k], grid.dx, grid.dy, px, py) * grid.cmask
    return fx, fy, divs


def diagnose_vertical_transport(state, grid, divs=None):
    """Interface transport w (m/s), zero at the bottom, accumulated upward
    from the per-layer thickness-flux divergence. The surface entry equals
    the implied free-surface motion d/dt(sum_k h)."""
    if divs is None:
        _, _, divs = thickness_fluxes(state, grid)
    w = np.zeros((grid.nz + 1, grid.ny, grid.nx))
    for k in range(grid.nz - 1, -1, -1):
        w[k] = w[k + 1] - divs[k]
    return w


def kinetic_energy(state, grid):
    px, py = grid.periodic_x, grid.periodic_y
    out = np.empty_like(state.h)
    for k in range(grid.nz):
        out[k] = K.ke_centers(state.u[k], state.v[k], px, py) * grid.cmask
    return out


def relative_vorticity(state, grid):
    px, py = grid.periodic_x, grid.periodic_y
    out = np.empty_like(state.u)
    for k in range(grid.nz):
        out[k] = K.vorticity(state.u[k], state.v[k], grid.dx, grid.dy, px, py)
    return out


def _coriolis_rows(cfg, grid):
    """f at u-face rows and v-face rows (beta plane about the domain middle)."""
    y0 = 0.5 * grid.ny * grid.dy
    y_u = (np.arange(grid.ny) + 0.5) * grid.dy
    y_v = np.arange(grid.ny) * grid.dy
    f_u = (cfg.f0 + cfg.beta * (y_u - y0))[:, None]
    f_v = (cfg.f0 + cfg.beta * (y_v - y0))[:, None]
    return f_u, f_v


def wind_stress_x(cfg, grid):
    """Steady zonal stress profile tau_x(y) (N/m^2) at u-face rows."""
    if cfg.wind_profile == "constant":
        return np.full((grid.ny, 1), cfg.tau_wind)
    y = (np.arange(grid.ny) + 0.5) / grid.ny
    return (-cfg.tau_wind * np.cos(2.0 * np.pi * y))[:, None]


def _dz_face(h_face):
    return np.maximum(h_face, _EPS_H)


def momentum_tendency(state, cfg, grid, p=None, w=None):
    """du, dv assembled from the enabled terms in canonical order."""
    nz = grid.nz
    px, py = grid.periodic_x, grid.periodic_y
    dx, dy = grid.dx, grid.dy
    u, v, h = state.u, state.v, state.h
    du = np.zeros_like(u)
    dv = np.zeros_like(v)

    h_u = np.empty_like(h)
    h_v = np.empty_like(h)
    for k in range(nz):
        h_u[k] = K.avg_c_to_u(h[k], px)
        h_v[k] = K.avg_c_to_v(h[k], py)

    # land faces are zeroed once after accumulation; exact because the
    # 0/1 mask distributes over the term sum and every term stays finite
    def add(k, tu, tv):
        du[k] += tu
        dv[k] += tv

    if cfg.coriolis:
        f_u, f_v = _coriolis_rows(cfg, grid)
        for k in range(nz):
            add(k, f_u * K.avg_v_to_u(v[k], px, py),
                -(f_v * K.avg_u_to_v(u[k], px, py)))

    if cfg.ke_gradient_and_relative_vorticity:
        for k in range(nz):
            om = K.vorticity(u[k], v[k], dx, dy, px, py)
            ke = K.ke_centers(u[k], v[k], px, py)
            tu = (K.avg_vertex_to_u(om, py) * K.avg_v_to_u(v[k], px, py)
                  - K.grad_x(ke, dx, px))
            tv = (-(K.avg_vertex_to_v(om, px) * K.avg_u_to_v(u[k], px, py))
                  - K.grad_y(ke, dy, py))
            add(k, tu, tv)

    if cfg.pressure_gradient:
        if p is None:
            p = hydrostatic_pressure(state, cfg, grid)
        rho = linear_eos(state.theta, state.sal, cfg) * grid.cmask
        zmid = layer_middepth(state, grid)
        c = cfg.g / cfg.rho0
        for k in range(nz):
            tu = -(K.grad_x(p[k], dx, px) / cfg.rho0
                   + c * (K.avg_c_to_u(rho[k], px) * K.grad_x(zmid[k], dx, px)))
            tv = -(K.grad_y(p[k], dy, py) / cfg.rho0
                   + c * (K.avg_c_to_v(rho[k], py) * K.grad_y(zmid[k], dy, py)))
            add(k, tu, tv)

    if cfg.vertical_advection and nz > 1:
        if w is None:
            w = diagnose_vertical_transport(state, grid)
        for k in range(nz):
            wmid = (w[k] + w[k + 1]) * 0.5
            w_u = K.avg_c_to_u(wmid, px)
            w_v = K.avg_c_to_v(wmid, py)
            if k == 0:
                dzu = 0.5 * (h_u[0] + h_u[1])
                dzv = 0.5 * (h_v[0] + h_v[1])
                dudz = (u[0] - u[1]) / _dz_face(dzu)
                dvdz = (v[0] - v[1]) / _dz_face(dzv)
            elif k == nz - 1:
                dzu = 0.5 * (h_u[k - 1] + h_u[k])
                dzv = 0.5 * (h_v[k - 1] + h_v[k])
                dudz = (u[k - 1] - u[k]) / _dz_face(dzu)
                dvdz = (v[k - 1] - v[k]) / _dz_face(dzv)
            else:
                dzu = 0.5 * h_u[k - 1] + h_u[k] + 0.5 * h_u[k + 1]
                dzv = 0.5 * h_v[k - 1] + h_v[k] + 0.5 * h_v[k + 1]
                dudz = (u[k - 1] - u[k + 1]) / _dz_face(dzu)
                dvdz = (v[k - 1] - v[k + 1]) / _dz_face(dzv)
            add(k, -(w_u * dudz), -(w_v * dvdz))

    if cfg.horizontal_mixing:
        dx2, dy2 = dx * dx, dy * dy
        for k in range(nz):
            add(k, cfg.nu_h * K.laplace_u(u[k], grid.umask, dx2, dy2, px, py),
                cfg.nu_h * K.laplace_u(v[k], grid.vmask, dx2, dy2, px, py))

    if cfg.vertical_mixing and nz > 1:
        fu = np.zeros((nz + 1, grid.ny, grid.nx))
        fv = np.zeros((nz + 1, grid.ny, grid.nx))
        for k in range(1, nz):
            fu[k] = cfg.nu_v * (u[k - 1] - u[k]) / _dz_face(0.5 * (h_u[k - 1] + h_u[k]))
            fv[k] = cfg.nu_v * (v[k - 1] - v[k]) / _dz_face(0.5 * (h_v[k - 1] + h_v[k]))
        for k in range(nz):
            add(k, (fu[k] - fu[k + 1]) / _dz_face(h_u[k]),
                (fv[k] - fv[k + 1]) / _dz_face(h_v[k]))

    if cfg.bottom_drag:
        kb = nz - 1
        vb = K.avg_v_to_u(v[kb], px, py)
        ub = K.avg_u_to_v(u[kb], px, py)
        spd_u = np.sqrt(u[kb] * u[kb] + vb * vb)
        spd_v = np.sqrt(ub * ub + v[kb] * v[kb])
        add(kb, -(cfg.c_drag * spd_u * u[kb] / _dz_face(h_u[kb])),
            -(cfg.c_drag * spd_v * v[kb] / _dz_face(h_v[kb])))

    if cfg.surface_stress:
        taux = wind_stress_x(cfg, grid)
        add(0, taux / (cfg.rho0 * _dz_face(h_u[0])), np.zeros_like(v[0]))

    if cfg.topographic_wave_drag:
        kb = nz - 1
        s_u, s_v = grid.bottom_slope
        add(kb, -(cfg.r_twd * (s_u * u[kb])), -(cfg.r_twd * (s_v * v[kb])))

    if cfg.divergence_damping:
        for k in range(nz):
            d = K.div(u[k], v[k], dx, dy, px, py)
            add(k, cfg.nu_div * K.grad_x(d, dx, px),
                cfg.nu_div * K.grad_y(d, dy, py))

    if cfg.momentum_forcing:
        taux = wind_stress_x(cfg, grid)
        add(0, taux / (cfg.rho0 * _dz_face(h_u[0])), np.zeros_like(v[0]))

    du *= grid.umask
    dv *= grid.vmask
    return du, dv


def thickness_tendency(state, grid, divs=None, w=None):
    """dh from flux divergence plus interface transport differences.

    Interior interfaces absorb the local divergence so only the top layer
    carries the column total (free-surface motion); global mass is conserved
    to round-off."""
    if divs is None:
        _, _, divs = thickness_fluxes(state, grid)
    if w is None:
        w = diagnose_vertical_transport(state, grid, divs)
    dh = np.empty_like(state.h)
    dh[0] = -divs[0] + w[1]
    for k in range(1, grid.nz):
        dh[k] = (-divs[k] - w[k]) + w[k + 1]
    return dh * grid.cmask


def _tracer_interface_transport(phi, w, grid):
    """Upwind phi*w at interior interfaces; zero through surface and bottom."""
    nz = grid.nz
    out = np.zeros((nz + 1, grid.ny, grid.nx))
    for j in range(1, nz):
        phi_int = np.where(w[j] > 0.0, phi[j], phi[j - 1])
        out[j] = phi_int * w[j]
    return out


def tracer_tendency(state, cfg, grid, w=None, fluxes=None):
    """(dtheta, dsal) as thickness-weighted rates divided by h.

    Advection reuses the exact thickness fluxes so a spatially constant
    tracer stays constant to round-off under the coupled h update."""
    nz = grid.nz
    px, py = grid.periodic_x, grid.periodic_y
    dx, dy = grid.dx, grid.dy
    h = state.h
    out = []
    need_adv = cfg.tracer_advection
    if need_adv and fluxes is None:
        fluxes = thickness_fluxes(state, grid)
    if need_adv and w is None:
        w = diagnose_vertical_transport(state, grid, fluxes[2])

    for phi in (state.theta, state.sal):
        dhphi = np.zeros_like(phi)
        if need_adv:
            fx, fy, _ = fluxes
            phiw = _tracer_interface_transport(phi, w, grid)
            for k in range(nz):
                gx = fx[k] * K.upwind_to_u(phi[k], state.u[k], px)
                gy = fy[k] * K.upwind_to_v(phi[k], state.v[k], py)
                gdiv = K.div(gx, gy, dx, dy, px, py)
                dhphi[k] += ((-gdiv - phiw[k]) + phiw[k + 1]) * grid.cmask
        if cfg.tracer_horizontal_mixing:
            for k in range(nz):
                wx = K.avg_c_to_u(h[k], px) * grid.umask
                wy = K.avg_c_to_v(h[k], py) * grid.vmask
                dhphi[k] += cfg.kappa_h * (
                    K.laplace_c(phi[k], wx, wy, dx, dy, px, py) * grid.cmask)
        if cfg.tracer_vertical_mixing and nz > 1:
            flx = np.zeros((nz + 1, grid.ny, grid.nx))
            for j in range(1, nz):
                flx[j] = cfg.kappa_v * (phi[j - 1] - phi[j]) / _dz_face(
                    0.5 * (h[j - 1] + h[j]))
            for k in range(nz):
                dhphi[k] += (flx[k] - flx[k + 1]) * grid.cmask
        if cfg.tracer_forcing and phi is state.theta:
            yhat = ((np.arange(grid.ny) + 0.5) / grid.ny)[:, None]
            target = cfg.theta_restore_base + cfg.theta_restore_range * (0.5 - yhat)
            dhphi[0] += (cfg.theta_restore_rate * h[0] * (target - phi[0])) * grid.cmask
        out.append(dhphi / np.maximum(h, _EPS_H) * grid.cmask)
    return out[0], out[1]


def full_tendency(state, cfg, grid):
    """All enabled tendencies with shared flux/transport intermediates."""
    need_transport = (cfg.thickness_advection or cfg.tracer_advection
                      or (cfg.vertical_advection and grid.nz > 1))
    fluxes = thickness_fluxes(state, grid) if need_transport else None
    w = (diagnose_vertical_transport(state, grid, fluxes[2])
         if need_transport else None)
    tend = zero_tendency(grid)
    du, dv = momentum_tendency(state, cfg, grid, w=w)
    tend.du, tend.dv = du, dv
    if cfg.thickness_advection:
        tend.dh = thickness_tendency(state, grid, fluxes[2], w)
    if cfg.tracer_advection or cfg.tracer_horizontal_mixing \
            or cfg.tracer_vertical_mixing or cfg.tracer_forcing:
        tend.dtheta, tend.dsal = tracer_tendency(state, cfg, grid, w, fluxes)
    return tend
