"""Feedback control and time stepping.

The feedback term is evaluated in split form mu*(I(E ref) - I(state)): the
current state is itself sampled on the observation mask and flood-filled
every step, which is the only faithful form once delta > 0. The explicit
scheme adds the term to the forward Euler update and requires mu*dt < 2;
the semi-implicit variant treats the state part implicitly by dividing the
nudged fields by (1 + mu*dt) and is unconditionally stable in the gain.
"""

from dataclasses import dataclass, replace as dc_replace
from typing import Optional

import numpy as np

from .errors import ValidationError
from .interpolant import build_obs_mask, interpolate_state
from .observations import observe_state, temporal_interp
from .physics import full_tendency
from .state import LayeredState, check_thickness

_EPS_H = 1e-30


@dataclass(frozen=True)
class AssimilationConfig:
    mu: float = 0.0                  # 1/s
    mu_scaling: str = "constant"     # constant | mu0_over_dt
    mu0: float = 0.0                 # used by mu0_over_dt (dimensionless)
    delta: int = 0                   # observation spacing, cell lengths
    dt_obs: float = 21600.0          # s
    scheme: str = "explicit"         # explicit | semi_implicit
    nudge_tracers: bool = False
    nudge_momentum: bool = True
    dt: float = 30.0                 # s
    delta_max: int = 3
    edge_based: bool = False
    n_smooth: int = 0
    override_stability: bool = False

    @property
    def mu_eff(self):
        if self.mu_scaling == "mu0_over_dt":
            return self.mu0 / self.dt
        return self.mu

    def replace(self, **kw):
        return dc_replace(self, **kw)

    def validate(self):
        if self.mu < 0.0 or self.mu0 < 0.0:
            raise ValidationError("feedback gain mu must be >= 0")
        if self.dt <= 0.0:
            raise ValidationError("assim.dt must be > 0")
        if self.mu_scaling not in ("constant", "mu0_over_dt"):
            raise ValidationError(
                f"assim.mu_scaling must be constant|mu0_over_dt, "
                f"got {self.mu_scaling!r}")
        if self.scheme not in ("explicit", "semi_implicit"):
            raise ValidationError(
                f"assim.scheme must be explicit|semi_implicit, got {self.scheme!r}")
        ratio = self.dt_obs / self.dt
        if self.dt_obs <= 0.0 or abs(ratio - round(ratio)) > 1e-9:
            raise ValidationError("assim.dt_obs must be a positive integer "
                                  "multiple of assim.dt")
        if self.delta < 0 or self.n_smooth < 0:
            raise ValidationError("assim.delta and assim.n_smooth must be >= 0")
        if self.delta > self.delta_max:
            raise ValidationError(
                f"assim.delta = {self.delta} exceeds delta_max = {self.delta_max}")
        if (self.scheme == "explicit" and not self.override_stability
                and self.mu_eff * self.dt >= 2.0):
            raise ValidationError(
                "explicit scheme requires mu*dt < 2 "
                f"(mu*dt = {self.mu_eff * self.dt:.3g})")
        return self


def feedback_momentum(mu, ref_u, ref_v, cur_u, cur_v):
    """mu * (I(E u_ref) - I(u)) on faces, m/s^2."""
    return mu * (ref_u - cur_u), mu * (ref_v - cur_v)


def feedback_tracer(mu, h, ref_phi, cur_phi):
    """Thickness-weighted tracer nudging h*mu*(I(E phi_ref) - I(phi));
    dividing by h recovers the induced dphi/dt."""
    return h * (mu * (ref_phi - cur_phi))


class Nudger:
    """Per-run feedback helper: interpolates the temporal observation blend
    and the current state onto the full grid through the shared mask."""

    def __init__(self, grid, store, cfg):
        self.grid = grid
        self.store = store
        self.cfg = cfg
        self.mask = store.mask

    def target(self, t):
        bundle = temporal_interp(self.store, t)
        return interpolate_state(self.grid, self.mask, bundle,
                                 edge_based=self.store.edge_based,
                                 n_smooth=self.cfg.n_smooth)

    def current(self, state):
        bundle = observe_state(self.grid, self.mask, state,
                               edge_based=self.store.edge_based)
        return interpolate_state(self.grid, self.mask, bundle,
                                 edge_based=self.store.edge_based,
                                 n_smooth=self.cfg.n_smooth)


def _tracer_update_explicit(phi, h_old, h_new, dphi, rate, dt, evolve_h):
    if not evolve_h:
        if rate is None:
            return phi + dt * dphi
        return phi + dt * (dphi + rate)
    if rate is None:
        num = h_old * phi + dt * (h_old * dphi)
    else:
        num = h_old * phi + dt * (h_old * (dphi + rate))
    return num / np.maximum(h_new, _EPS_H)


def step_explicit(state, tend, feedback, dt, grid, evolve_h=True):
    """new = old + dt*(tendency + feedback); feedback entries are rate
    fields (the thickness-weighted tracer term divided by h)."""
    fb = feedback or {}
    du = tend.du if "u" not in fb else tend.du + fb["u"]
    dv = tend.dv if "v" not in fb else tend.dv + fb["v"]
    u = state.u + dt * du
    v = state.v + dt * dv
    h = state.h + dt * tend.dh if evolve_h else state.h.copy()
    theta = _tracer_update_explicit(state.theta, state.h, h, tend.dtheta,
                                    fb.get("theta"), dt, evolve_h)
    sal = _tracer_update_explicit(state.sal, state.h, h, tend.dsal,
                                  fb.get("sal"), dt, evolve_h)
    new = LayeredState((u * grid.umask), (v * grid.vmask), h * grid.cmask,
                       theta * grid.cmask, sal * grid.cmask, state.t + dt)
    check_thickness(new, grid)
    return new


def _tracer_update_semi(phi, h_old, h_new, dphi, mu, ref, dt, evolve_h):
    if ref is None:
        if not evolve_h:
            return phi + dt * dphi
        num = h_old * phi + dt * (h_old * dphi)
        return num / np.maximum(h_new, _EPS_H)
    if not evolve_h:
        return (phi + dt * (dphi + mu * ref)) / (1.0 + mu * dt)
    num = h_old * phi + dt * (h_old * (dphi + mu * ref))
    return num / np.maximum(h_new + (dt * mu) * h_old, _EPS_H)


def step_semi_implicit(state, tend, mu, target, dt, grid,
                       nudge_momentum=True, nudge_tracers=False, evolve_h=True):
    """Predictor-corrector: the reference part of the feedback enters
    explicitly, the state part implicitly, so nudged fields are divided by
    (1 + mu*dt) uniformly (including flood-filled unobserved cells)."""
    target = target or {}
    denom = 1.0 + mu * dt
    if nudge_momentum and "u" in target:
        u = (state.u + dt * (tend.du + mu * target["u"])) / denom
        v = (state.v + dt * (tend.dv + mu * target["v"])) / denom
    else:
        u = state.u + dt * tend.du
        v = state.v + dt * tend.dv
    h = state.h + dt * tend.dh if evolve_h else state.h.copy()
    ref_theta = target.get("theta") if nudge_tracers else None
    ref_sal = target.get("sal") if nudge_tracers else None
    theta = _tracer_update_semi(state.theta, state.h, h, tend.dtheta,
                                mu, ref_theta, dt, evolve_h)
    sal = _tracer_update_semi(state.sal, state.h, h, tend.dsal,
                              mu, ref_sal, dt, evolve_h)
    new = LayeredState((u * grid.umask), (v * grid.vmask), h * grid.cmask,
                       theta * grid.cmask, sal * grid.cmask, state.t + dt)
    check_thickness(new, grid)
    return new


def advance(state, grid, phys, assim, nudger=None):
    """One model step, free-running or assimilated per the config."""
    tend = full_tendency(state, phys, grid)
    evolve_h = phys.thickness_advection
    mu = assim.mu_eff
    if nudger is None or mu == 0.0:
        return step_explicit(state, tend, None, assim.dt, grid, evolve_h)
    if assim.scheme == "explicit":
        tgt = nudger.target(state.t)
        cur = nudger.current(state)
        fb = {}
        if assim.nudge_momentum:
            fb["u"], fb["v"] = feedback_momentum(mu, tgt["u"], tgt["v"],
                                                 cur["u"], cur["v"])
        if assim.nudge_tracers:
            fb["theta"] = mu * (tgt["theta"] - cur["theta"])
            fb["sal"] = mu * (tgt["sal"] - cur["sal"])
        return step_explicit(state, tend, fb, assim.dt, grid, evolve_h)
    tgt = nudger.target(state.t)
    return step_semi_implicit(state, tend, mu, tgt, assim.dt, grid,
                              assim.nudge_momentum, assim.nudge_tracers,
                              evolve_h)


@dataclass
class StabilityCheck:
    name: str
    value: float
    limit: float
    ok: bool


@dataclass
class StabilityReport:
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def format(self):
        lines = []
        for c in self.checks:
            status = "pass" if c.ok else "FAIL"
            lines.append(f"{status}  {c.name}: value = {c.value:.6g}, "
                         f"limit = {c.limit:.6g}")
        return "\n".join(lines)


def check_stability(assim, grid, phys):
    """CFL-style report: feedback gain, gravity waves, explicit diffusion,
    and the divergence-damping window when the wave loop is active."""
    checks = []
    mu_dt = assim.mu_eff * assim.dt
    if assim.scheme == "explicit":
        checks.append(StabilityCheck("mu_dt_explicit", mu_dt, 2.0, mu_dt < 2.0))
    hmax = grid.bottom_depth.max()
    c = np.sqrt(phys.g * hmax)
    dxm = min(grid.dx, grid.dy)
    limit = dxm / c if c > 0.0 else np.inf
    checks.append(StabilityCheck("gravity_cfl", assim.dt, limit, assim.dt < limit))
    limit = dxm * dxm / (4.0 * phys.nu_h) if phys.nu_h > 0.0 else np.inf
    checks.append(StabilityCheck("horizontal_mixing_cfl", assim.dt, limit,
                                 assim.dt < limit))
    if phys.pressure_gradient and phys.thickness_advection:
        # forward Euler wave mode: |G|^2 = 1 - (nu_div - c^2 dt) k^2 dt, so
        # nu_div >= c^2 dt is required, with nu_div dt k_max^2 staying < 2
        nu = phys.nu_div if phys.divergence_damping else 0.0
        ratio = (c * c * assim.dt / nu) if nu > 0.0 else np.inf
        a8 = 8.0 * nu * assim.dt / (dxm * dxm)
        checks.append(StabilityCheck("wave_damping_ratio", ratio, 1.0,
                                     ratio < 1.0 and a8 < 2.0))
    return StabilityReport(checks)
