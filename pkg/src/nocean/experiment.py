"""Twin-experiment orchestration: spin-up, reference runs with observation
recording, assimilated twin runs with error diagnostics, and the three study
campaigns (validation suite, term-toggle ablation, parameter sweeps).

The identical-twin protocol: a free reference run generates observations, its
final (decorrelated) state initializes the twin, and the twin assimilates the
stored observations while the error against the temporally interpolated
reference is tracked. The ablation instead nudges toward a time-independent
reference with individual physics terms enabled, which is what makes the
drag-only rows reach machine precision while forced/pressure rows settle at
a gain-limited floor.
"""

import math
from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from .assimilation import AssimilationConfig, Nudger, advance, check_stability
from .errors import NoEquilibrium, ShapeMismatch, ValidationError
from .grid import build_grid
from .interpolant import build_obs_mask
from .observations import ObservationStore, record_snapshot, temporal_interp_full
from .physics import MOMENTUM_TERMS, PhysicsConfig, kinetic_energy
from .state import enforce_land, zeros_state

DAY = 86400.0


@dataclass(frozen=True)
class ExperimentConfig:
    nx: int = 64
    ny: int = 64
    nz: int = 3
    dx: float = 1.0e4
    dy: float = 1.0e4
    mask_spec: str = "basin:2"
    depth_spec: str = "flat:1000"
    periodic_x: bool = False
    periodic_y: bool = False
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    assim: AssimilationConfig = field(default_factory=AssimilationConfig)
    spinup_duration: float = 40.0 * DAY
    spinup_ke_window: float = 10.0 * DAY
    spinup_ke_sample: float = 21600.0
    spinup_ke_tol: float = 0.12
    reference_duration: float = 30.0 * DAY
    error_output_interval: float = 21600.0
    seed: int = 42
    init_noise: float = 0.05        # m/s
    theta_surf: float = 18.0
    theta_bot: float = 4.0
    sal_surf: float = 34.0
    sal_bot: float = 35.5
    ablation_duration: float = 1.0 * DAY
    ablation_output_interval: float = 1800.0
    ablation_mu_explicit: float = 1.0e-3
    ablation_mu_implicit: float = 10.0
    ablation_noise: float = 0.2     # m/s, twin start velocities
    ablation_tilt: float = 0.5      # m, static-reference surface tilt
    region: tuple | None = None

    def replace(self, **kw):
        return dc_replace(self, **kw)

    def validate(self):
        self.physics.validate()
        self.assim.validate()
        for name in ("spinup_duration", "spinup_ke_window", "spinup_ke_sample",
                     "reference_duration", "error_output_interval",
                     "ablation_duration", "ablation_output_interval"):
            if getattr(self, name) <= 0.0:
                raise ValidationError(f"experiment.{name} must be > 0")
        for name in ("error_output_interval", "ablation_output_interval"):
            ratio = getattr(self, name) / self.assim.dt
            if abs(ratio - round(ratio)) > 1e-9:
                raise ValidationError(
                    f"experiment.{name} must be a multiple of assim.dt")
        return self

    def make_grid(self):
        return build_grid(self.nx, self.ny, self.nz, self.dx, self.dy,
                          self.mask_spec, self.depth_spec,
                          self.periodic_x, self.periodic_y)

    def theta_profile(self, nz=None):
        nz = nz or self.nz
        frac = (np.arange(nz) + 0.5) / nz
        return self.theta_surf + (self.theta_bot - self.theta_surf) * frac

    def sal_profile(self, nz=None):
        nz = nz or self.nz
        frac = (np.arange(nz) + 0.5) / nz
        return self.sal_surf + (self.sal_bot - self.sal_surf) * frac


@dataclass
class ErrorSeries:
    times: np.ndarray
    rms_ke: np.ndarray
    rms_vel: np.ndarray
    rms_theta: np.ndarray
    rms_sal: np.ndarray

    @property
    def min_rms_ke(self):
        vals = self.rms_ke[self.times > self.times[0]]
        return float(vals.min()) if vals.size else float(self.rms_ke.min())

    def plateau(self, name="rms_vel"):
        """Median over the final third of the run."""
        vals = getattr(self, name)
        n = max(1, len(vals) // 3)
        return float(np.median(vals[-n:]))

    def plateau_spread_decades(self, name="rms_vel"):
        vals = getattr(self, name)
        n = max(2, len(vals) // 3)
        tail = np.log10(np.maximum(vals[-n:], 1e-300))
        return float(np.std(tail))

    def decay_rate(self, t_max, name="rms_vel", floor=1e-300):
        """Initial exponential decay rate (1/s) from a log-linear fit over
        times <= t_max."""
        t = self.times - self.times[0]
        sel = t <= t_max
        y = np.log(np.maximum(getattr(self, name)[sel], floor))
        if sel.sum() < 2:
            raise ValidationError("not enough points to fit a decay rate")
        slope = np.polyfit(t[sel], y, 1)[0]
        return -float(slope)


def rms_error(field_a, field_b, grid, where="center"):
    """sqrt(mean((a-b)^2)) over ocean points (or active faces)."""
    a = np.asarray(field_a)
    b = np.asarray(field_b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {b.shape} differ")
    sel = {"center": grid.mask, "uface": grid.umask_b, "vface": grid.vmask_b}[where]
    d = (a - b)[..., sel]
    return float(np.sqrt(np.mean(d * d)))


def _rms_vel(a, b, grid):
    du = (a.u - b.u)[:, grid.umask_b]
    dv = (a.v - b.v)[:, grid.vmask_b]
    num = np.sum(du * du) + np.sum(dv * dv)
    return float(np.sqrt(num / (du.size + dv.size)))


def error_entry(state, ref, grid):
    ke_a = kinetic_energy(state, grid)
    ke_b = kinetic_energy(ref, grid)
    return (rms_error(ke_a, ke_b, grid),
            _rms_vel(state, ref, grid),
            rms_error(state.theta, ref.theta, grid),
            rms_error(state.sal, ref.sal, grid))


def _smooth_noise(rng, shape, passes=2):
    f = rng.standard_normal(shape)
    for _ in range(passes):
        f = 0.25 * (np.roll(f, 1, -1) + np.roll(f, -1, -1)
                    + np.roll(f, 1, -2) + np.roll(f, -1, -2))
    return f


def initial_state(cfg, grid, rng=None):
    """Stratified resting state with a meridional surface front and seeded
    velocity noise to break symmetry."""
    rng = rng or np.random.default_rng(cfg.seed)
    s = zeros_state(grid)
    s.h[:] = (grid.bottom_depth / grid.nz) * grid.cmask
    tp = cfg.theta_profile()
    sp = cfg.sal_profile()
    yhat = ((np.arange(grid.ny) + 0.5) / grid.ny)[:, None]
    front = cfg.physics.theta_restore_range * (0.5 - yhat)
    for k in range(grid.nz):
        s.theta[k] = tp[k] * grid.cmask
        s.sal[k] = sp[k] * grid.cmask
    s.theta[0] += front * grid.cmask
    shape = (grid.nz, grid.ny, grid.nx)
    s.u[:] = cfg.init_noise * _smooth_noise(rng, shape)
    s.v[:] = cfg.init_noise * _smooth_noise(rng, shape)
    return enforce_land(s, grid)


def _require_stable(assim, grid, phys):
    report = check_stability(assim, grid, phys)
    if not report.ok and not assim.override_stability:
        raise ValidationError("stability check failed:\n" + report.format())
    return report


def _steps(duration, dt):
    n = round(duration / dt)
    if abs(n * dt - duration) > 1e-6 * max(duration, 1.0):
        raise ValidationError(f"duration {duration} is not a multiple of dt {dt}")
    return int(n)


def mean_kinetic_energy(state, grid):
    ke = kinetic_energy(state, grid)
    return float(ke[:, grid.mask].mean())


def spin_up(cfg, grid=None, history=None):
    """Free run until the trailing-window mean KE stops drifting.

    Returns the spun state; raises NoEquilibrium when the drift tolerance is
    never met within spinup_duration."""
    grid = grid or cfg.make_grid()
    _require_stable(cfg.assim, grid, cfg.physics)
    state = initial_state(cfg, grid)
    dt = cfg.assim.dt
    total = _steps(cfg.spinup_duration, dt)
    sample_every = max(1, _steps(cfg.spinup_ke_sample, dt))
    window_n = max(4, round(cfg.spinup_ke_window / cfg.spinup_ke_sample))
    samples = [mean_kinetic_energy(state, grid)]
    if history is not None:
        history.append((0.0, samples[0]))
    for n in range(1, total + 1):
        state = advance(state, grid, cfg.physics, cfg.assim)
        if n % sample_every:
            continue
        ke = mean_kinetic_energy(state, grid)
        samples.append(ke)
        if history is not None:
            history.append((state.t, ke))
        if len(samples) >= 4 and np.mean(samples[-4:]) < 1e-30:
            return state
        if len(samples) >= window_n:
            w = np.asarray(samples[-window_n:])
            half = len(w) // 2
            m1, m2 = w[:half].mean(), w[half:].mean()
            drift = abs(m2 - m1) / max(abs(m1), abs(m2), 1e-30)
            if drift <= cfg.spinup_ke_tol:
                return state
    raise NoEquilibrium(
        f"KE drift never fell below {cfg.spinup_ke_tol} within "
        f"{cfg.spinup_duration / DAY:.1f} days")


def run_reference(cfg, grid, state):
    """Free run over reference_duration recording snapshots every dt_obs;
    mu is forced to zero regardless of the config."""
    assim = cfg.assim
    _require_stable(assim, grid, cfg.physics)
    dt = assim.dt
    every = _steps(assim.dt_obs, dt)
    total = _steps(cfg.reference_duration, dt)
    if total % every:
        raise ValidationError("reference_duration must be a multiple of dt_obs")
    mask = build_obs_mask(grid, assim.delta, cfg.region, assim.delta_max)
    store = ObservationStore(dt_obs=assim.dt_obs, mask=mask,
                             edge_based=assim.edge_based, store_full=True,
                             grid_hash=grid.hash)
    state = state.copy()
    state.t = 0.0
    record_snapshot(store, 0.0, state, grid)
    for n in range(1, total + 1):
        state = advance(state, grid, cfg.physics, assim)  # no nudger: free run
        if n % every == 0:
            record_snapshot(store, state.t, state, grid)
    return state, store


def init_twin(cfg, store, ref_final):
    """Twin initial state: the reference final state, clock reset to the
    start of the observation window."""
    twin = ref_final.copy()
    twin.t = store.times[0]
    return twin


def run_twin(cfg, grid, store, twin0):
    """Assimilated run across the stored window with error diagnostics every
    error_output_interval (a control run when mu = 0)."""
    assim = cfg.assim.validate()
    _require_stable(assim, grid, cfg.physics)
    dt = assim.dt
    t0, t1 = store.window()
    total = _steps(t1 - t0, dt)
    out_every = _steps(cfg.error_output_interval, dt)
    nudger = Nudger(grid, store, assim) if assim.mu_eff > 0.0 else None
    state = twin0.copy()
    times, rows = [state.t], [error_entry(state, temporal_interp_full(store, state.t), grid)]
    for n in range(1, total + 1):
        state = advance(state, grid, cfg.physics, assim, nudger)
        if n % out_every == 0 or n == total:
            times.append(state.t)
            rows.append(error_entry(state, temporal_interp_full(store, state.t), grid))
    arr = np.asarray(rows)
    return ErrorSeries(times=np.asarray(times), rms_ke=arr[:, 0],
                       rms_vel=arr[:, 1], rms_theta=arr[:, 2], rms_sal=arr[:, 3])


# ---------------------------------------------------------------------------
# static-reference machinery (validation suite and ablation)

def static_reference_state(cfg, grid, tilt=0.0, rng=None):
    """Stratified motionless state; optional smooth free-surface tilt makes
    the pressure gradient nonzero so gain-limited floors are visible."""
    base = initial_state(cfg.replace(init_noise=0.0), grid,
                         rng or np.random.default_rng(cfg.seed + 1))
    if tilt != 0.0:
        jj = (np.arange(grid.ny) + 0.5) / grid.ny
        ii = (np.arange(grid.nx) + 0.5) / grid.nx
        pattern = np.sin(2.0 * np.pi * ii)[None, :] * np.sin(2.0 * np.pi * jj)[:, None]
        base.h[0] += tilt * pattern * grid.cmask
    return base


def constant_store(cfg, grid, ref_state, duration, delta=0, edge_based=True):
    """Observation store holding one time-independent reference."""
    mask = build_obs_mask(grid, delta, cfg.region, cfg.assim.delta_max)
    store = ObservationStore(dt_obs=duration, mask=mask, edge_based=edge_based,
                             store_full=True, grid_hash=grid.hash)
    s0 = ref_state.copy()
    s0.t = 0.0
    record_snapshot(store, 0.0, s0, grid)
    s1 = ref_state.copy()
    s1.t = duration
    record_snapshot(store, duration, s1, grid)
    return store


def static_decay_series(cfg, grid, scheme, mu_dt, n_steps, nudge_tracers=False,
                        tracer_offset=0.0, override_stability=False):
    """Pure-nudging convergence toward a motionless reference with all
    physics off; per-step error series for closed-form checks."""
    phys = cfg.physics.with_flags(False)
    dt = cfg.assim.dt
    duration = n_steps * dt
    ref = static_reference_state(cfg, grid, tilt=0.0)
    store = constant_store(cfg, grid, ref, duration, delta=0, edge_based=True)
    rng = np.random.default_rng(cfg.seed)
    twin = ref.copy()
    shape = (grid.nz, grid.ny, grid.nx)
    twin.u = twin.u + cfg.ablation_noise * _smooth_noise(rng, shape) * grid.umask
    twin.v = twin.v + cfg.ablation_noise * _smooth_noise(rng, shape) * grid.vmask
    if tracer_offset:
        twin.theta = twin.theta + tracer_offset * grid.cmask
        twin.sal = twin.sal + 0.5 * tracer_offset * grid.cmask
    twin.t = 0.0
    assim = cfg.assim.replace(mu=mu_dt / dt, mu_scaling="constant", delta=0,
                              dt_obs=duration, scheme=scheme,
                              nudge_tracers=nudge_tracers, nudge_momentum=True,
                              edge_based=True,
                              override_stability=override_stability)
    run_cfg = cfg.replace(assim=assim, physics=phys,
                          error_output_interval=dt)
    return run_twin(run_cfg, grid, store, twin)


ABLATION_FULL_FLAGS = tuple(n for n in MOMENTUM_TERMS if n != "momentum_forcing") + (
    "thickness_advection", "tracer_advection", "tracer_horizontal_mixing",
    "tracer_vertical_mixing", "tracer_forcing")

ABLATION_ROWS = (
    ("No Dynamics", ()),
    ("Full Dynamics", ABLATION_FULL_FLAGS),
    ("Coriolis Only", ("coriolis",)),
    ("Bottom Drag Only", ("bottom_drag",)),
    ("Surface Stress Only", ("surface_stress",)),
    ("Topographic Wave Drag Only", ("topographic_wave_drag",)),
    ("Horizontal Mixing Only", ("horizontal_mixing",)),
    ("Vertical Mixing Only", ("vertical_mixing",)),
    ("Vertical Advection Only", ("vertical_advection",)),
    ("Pressure Gradient Only", ("pressure_gradient",)),
)

ABLATION_SCHEMES = ("explicit", "semi_implicit")


@dataclass
class AblationRow:
    name: str
    plateau: dict            # scheme -> plateau rms_vel
    series: dict             # scheme -> ErrorSeries


def run_ablation(cfg, grid=None, progress=None):
    """Term-toggle study: nudge toward a static stratified reference with a
    single physics term enabled, for both schemes. Returns the 10-row table."""
    grid = grid or cfg.make_grid()
    duration = cfg.ablation_duration
    ref = static_reference_state(cfg, grid, tilt=cfg.ablation_tilt)
    store = constant_store(cfg, grid, ref, duration, delta=0, edge_based=True)
    rng = np.random.default_rng(cfg.seed + 2)
    shape = (grid.nz, grid.ny, grid.nx)
    twin0 = ref.copy()
    twin0.u = twin0.u + cfg.ablation_noise * _smooth_noise(rng, shape) * grid.umask
    twin0.v = twin0.v + cfg.ablation_noise * _smooth_noise(rng, shape) * grid.vmask
    twin0.t = 0.0
    mu = {"explicit": cfg.ablation_mu_explicit,
          "semi_implicit": cfg.ablation_mu_implicit}
    rows = []
    for name, flags in ABLATION_ROWS:
        phys = cfg.physics.with_only(*flags)
        plateaus, series = {}, {}
        for scheme in ABLATION_SCHEMES:
            assim = cfg.assim.replace(mu=mu[scheme], mu_scaling="constant",
                                      delta=0, dt_obs=duration, scheme=scheme,
                                      nudge_tracers=False, nudge_momentum=True,
                                      edge_based=True)
            run_cfg = cfg.replace(
                assim=assim, physics=phys,
                error_output_interval=cfg.ablation_output_interval)
            es = run_twin(run_cfg, grid, store, twin0)
            plateaus[scheme] = es.plateau("rms_vel")
            series[scheme] = es
            if progress:
                progress(f"{name} [{scheme}]: plateau rms_vel = "
                         f"{plateaus[scheme]:.3e}")
        rows.append(AblationRow(name=name, plateau=plateaus, series=series))
    return rows


# ---------------------------------------------------------------------------
# parameter sweeps

SWEEP_AXES = ("mu", "dt_obs", "delta", "tracers")


def _sweep_config(cfg, axis, value):
    if axis == "mu":
        return cfg.replace(assim=cfg.assim.replace(mu=float(value)))
    if axis == "dt_obs":
        return cfg.replace(assim=cfg.assim.replace(dt_obs=float(value)))
    if axis == "delta":
        return cfg.replace(assim=cfg.assim.replace(delta=int(value)))
    if axis == "tracers":
        on = bool(int(value))
        return cfg.replace(assim=cfg.assim.replace(nudge_tracers=on))
    raise ValidationError(f"unknown sweep axis {axis!r}; "
                          f"expected one of {SWEEP_AXES}")


@dataclass
class SweepRow:
    axis: str
    value: float
    min_rms_ke: float
    plateau_ke: float
    plateau_vel: float
    plateau_theta: float
    plateau_sal: float
    series: ErrorSeries


def run_sweep(cfg, axis, values, grid=None, base_state=None, progress=None,
              store_cache=None):
    """One twin experiment per value along the axis; the spun-up base state
    is shared, the reference is re-run per value (snapshot spacing and mask
    depend on it). store_cache, when given, shares reference runs between
    values/sweeps with identical observation settings."""
    grid = grid or cfg.make_grid()
    for value in values:
        _sweep_config(cfg, axis, value).assim.validate()
    if base_state is None:
        base_state = spin_up(cfg, grid)
    rows = []
    for value in values:
        vcfg = _sweep_config(cfg, axis, value)
        key = (vcfg.assim.delta, vcfg.assim.dt_obs, vcfg.assim.edge_based,
               vcfg.assim.dt, vcfg.reference_duration, vcfg.region)
        if store_cache is not None and key in store_cache:
            ref_final, store = store_cache[key]
        else:
            ref_final, store = run_reference(vcfg, grid, base_state)
            if store_cache is not None:
                store_cache[key] = (ref_final, store)
        twin0 = init_twin(vcfg, store, ref_final)
        es = run_twin(vcfg, grid, store, twin0)
        rows.append(SweepRow(axis=axis, value=float(value),
                             min_rms_ke=es.min_rms_ke,
                             plateau_ke=es.plateau("rms_ke"),
                             plateau_vel=es.plateau("rms_vel"),
                             plateau_theta=es.plateau("rms_theta"),
                             plateau_sal=es.plateau("rms_sal"),
                             series=es))
        if progress:
            progress(f"{axis} = {value}: min_rms_ke = {es.min_rms_ke:.4e}, "
                     f"plateau_ke = {rows[-1].plateau_ke:.4e}")
    return rows


# ---------------------------------------------------------------------------
# validation suite (static state, scheme comparison, stability boundary,
# time-step robustness)

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def closed_form_deviation(series, factor):
    """Max relative deviation of rms_vel[n] from rms_vel[0]*factor^n."""
    r0 = series.rms_vel[0]
    n = np.arange(len(series.rms_vel))
    predicted = r0 * np.power(factor, n)
    dev = np.abs(series.rms_vel / predicted - 1.0)
    return float(dev.max())


def steps_to(series, threshold):
    idx = np.nonzero(series.rms_vel <= threshold)[0]
    return int(idx[0]) if idx.size else None


def check_static_convergence(cfg, grid, scheme, mu_dt, n_steps, reach,
                             within_steps, tol=1e-12):
    series = static_decay_series(cfg, grid, scheme, mu_dt, n_steps)
    factor = (1.0 - mu_dt) if scheme == "explicit" else 1.0 / (1.0 + mu_dt)
    dev = closed_form_deviation(series, factor)
    hit = steps_to(series, reach)
    ok = dev <= tol and hit is not None and hit <= within_steps
    detail = (f"max closed-form deviation {dev:.2e} (tol {tol:.0e}); "
              f"rms_vel <= {reach:.0e} at step {hit}")
    return CheckResult(f"static_{scheme}", ok, detail), series


def check_stability_boundary(cfg, grid, mu_dt=2.5, n_steps=40, tol=1e-9):
    series = static_decay_series(cfg, grid, "explicit", mu_dt, n_steps,
                                 override_stability=True)
    ratios = series.rms_vel[1:] / series.rms_vel[:-1]
    err = float(np.abs(ratios - (mu_dt - 1.0)).max())
    growth_ok = err <= tol
    try:
        cfg.assim.replace(mu=2.0 / cfg.assim.dt, mu_scaling="constant",
                          scheme="explicit").validate()
        rejected = False
    except ValidationError:
        rejected = True
    ok = growth_ok and rejected
    detail = (f"per-step growth factor {mu_dt - 1.0} +/- {err:.2e}; "
              f"mu*dt = 2 rejected without override: {rejected}")
    return CheckResult("stability_boundary", ok, detail)


def run_dt_robustness(cfg, grid=None, base_state=None, mu=1.0e-4, mu0=3.0e-3,
                      factors=(1, 2, 4), duration=2.0 * DAY):
    """Plateau errors for fixed mu across dt, dt/2, dt/4 plus the mu0/dt
    scaling at the smallest dt."""
    grid = grid or cfg.make_grid()
    if base_state is None:
        base_state = spin_up(cfg, grid)
    out = {"fixed": {}, "scaled": {}}
    for f in factors:
        dtf = cfg.assim.dt / f
        vcfg = cfg.replace(
            assim=cfg.assim.replace(dt=dtf, mu=mu, mu_scaling="constant"),
            reference_duration=duration)
        ref_final, store = run_reference(vcfg, grid, base_state)
        twin0 = init_twin(vcfg, store, ref_final)
        out["fixed"][dtf] = run_twin(vcfg, grid, store, twin0)
    dt_min = cfg.assim.dt / max(factors)
    vcfg = cfg.replace(
        assim=cfg.assim.replace(dt=dt_min, mu0=mu0, mu_scaling="mu0_over_dt"),
        reference_duration=duration)
    ref_final, store = run_reference(vcfg, grid, base_state)
    twin0 = init_twin(vcfg, store, ref_final)
    out["scaled"][dt_min] = run_twin(vcfg, grid, store, twin0)
    return out


def check_dt_robustness(cfg, grid=None, base_state=None, mu=1.0e-4,
                        mu0=3.0e-3, duration=2.0 * DAY, spread_limit=3.0):
    res = run_dt_robustness(cfg, grid, base_state, mu, mu0, duration=duration)
    plateaus = {dt: es.plateau("rms_ke") for dt, es in res["fixed"].items()}
    vals = list(plateaus.values())
    spread = max(vals) / max(min(vals), 1e-300)
    dt_min = min(res["fixed"])
    scaled = res["scaled"][dt_min].plateau("rms_ke")
    fixed_small = plateaus[dt_min]
    finite = all(np.isfinite(es.rms_ke).all()
                 for es in list(res["fixed"].values()) + list(res["scaled"].values()))
    ok = spread <= spread_limit and scaled <= fixed_small and finite
    detail = (f"fixed-mu plateaus {[f'{v:.3e}' for v in vals]} "
              f"(spread {spread:.2f}, limit {spread_limit}); "
              f"mu0/dt plateau {scaled:.3e} <= fixed {fixed_small:.3e}: "
              f"{scaled <= fixed_small}")
    return CheckResult("dt_robustness", ok, detail), res


def validation_suite(cfg, grid=None, include_dt_sweep=True, progress=None):
    """The static-state, scheme-comparison, stability-boundary and dt checks;
    returns CheckResult rows."""
    grid = grid or cfg.make_grid()
    results = []

    def report(r):
        if progress:
            progress(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
        results.append(r)

    expl, expl_series = check_static_convergence(
        cfg, grid, "explicit", 0.1, 400, reach=1e-14, within_steps=400)
    report(expl)
    impl, impl_series = check_static_convergence(
        cfg, grid, "semi_implicit", 1.0, 50, reach=1e-14, within_steps=50)
    report(impl)
    n_expl = steps_to(expl_series, 1e-12)
    n_impl = steps_to(impl_series, 1e-12)
    comp_ok = n_impl is not None and n_expl is not None and n_impl < n_expl
    report(CheckResult(
        "scheme_comparison", comp_ok,
        f"steps to 1e-12: semi_implicit {n_impl} < explicit {n_expl}"))
    report(check_stability_boundary(cfg, grid))
    if include_dt_sweep:
        check, _ = check_dt_robustness(
            cfg, grid, duration=min(2.0 * DAY, cfg.reference_duration))
        report(check)
    return results
