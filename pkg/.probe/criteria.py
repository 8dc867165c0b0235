"""Prototype the sweep acceptance criteria on a probe state."""
import sys
import time
import numpy as np
from nocean.experiment import (DAY, ExperimentConfig, init_twin, run_reference,
                               run_sweep, run_twin)
from nocean.state import LayeredState

snap = np.load(sys.argv[1])
cfg = ExperimentConfig(dx=float(sys.argv[2]), dy=float(sys.argv[2]))
cfg = cfg.replace(physics=cfg.physics.replace(
    nu_h=float(sys.argv[3]), tau_wind=float(sys.argv[4]), c_drag=float(sys.argv[5])))
cfg = cfg.replace(reference_duration=3 * DAY, error_output_interval=10800.0,
                  assim=cfg.assim.replace(dt_obs=21600.0, delta=0))
grid = cfg.make_grid()
base = LayeredState(u=snap["u"], v=snap["v"], h=snap["h"],
                    theta=snap["theta"], sal=snap["sal"], t=float(snap["t"]))

t0 = time.time()
cache = {}

def show(title, rows):
    print(f"--- {title}")
    for r in rows:
        print(f"  {r.axis}={r.value:g}: min_ke={r.min_rms_ke:.4e} "
              f"plat_ke={r.plateau_ke:.4e} plat_vel={r.plateau_vel:.4e} "
              f"plat_th={r.plateau_theta:.4e} plat_sal={r.plateau_sal:.4e}",
              flush=True)

# mu sweep at delta=0
rows_mu = run_sweep(cfg, "mu", [1e-6, 1e-5, 1e-4], grid, base, store_cache=cache)
show("mu sweep (delta=0, dt_obs=6h)", rows_mu)

# control run
ccfg = cfg.replace(assim=cfg.assim.replace(mu=0.0))
ref_final, store = run_reference(ccfg, grid, base)
twin0 = init_twin(ccfg, store, ref_final)
es = run_twin(ccfg, grid, store, twin0)
print(f"--- control: rms_ke[0]={es.rms_ke[0]:.4e} min/init="
      f"{(es.rms_ke[1:]/es.rms_ke[0]).min():.3f} rms_vel0={es.rms_vel[0]:.4e}",
      flush=True)

# tracers on/off at mu=1e-4, delta=0
tcfg = cfg.replace(assim=cfg.assim.replace(mu=1e-4))
rows_tr = run_sweep(tcfg, "tracers", [0, 1], grid, base, store_cache=cache)
show("tracers off/on (mu=1e-4, delta=0)", rows_tr)

# delta sweep at mu=2e-5
dcfg = cfg.replace(assim=cfg.assim.replace(mu=2e-5), error_output_interval=3600.0)
rows_d = run_sweep(dcfg, "delta", [0, 1, 2, 3], grid, base, store_cache=cache)
show("delta sweep (mu=2e-5)", rows_d)
for r in rows_d:
    rate = r.series.decay_rate(t_max=2 * DAY)
    print(f"  delta={r.value:g}: decay rate={rate:.3e} 1/s", flush=True)

# dt_obs sweep at delta=1, mu=1e-4
ocfg = cfg.replace(assim=cfg.assim.replace(mu=1e-4, delta=1))
rows_o = run_sweep(ocfg, "dt_obs", [10800.0, 21600.0, 43200.0], grid, base,
                   store_cache=cache)
show("dt_obs sweep (delta=1, mu=1e-4)", rows_o)

print(f"total {time.time()-t0:.0f}s")
