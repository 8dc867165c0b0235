"""Scan wind/viscosity/drag regimes for eddying (chaotic) equilibria."""
import sys
import numpy as np
from nocean.experiment import ExperimentConfig, initial_state, mean_kinetic_energy
from nocean.assimilation import advance

CASES = {
    "A": dict(nu_h=50.0, tau_wind=0.2, c_drag=1.5e-3, dx=1.0e4),
    "B": dict(nu_h=60.0, tau_wind=0.25, c_drag=2.0e-3, dx=1.5e4),
    "C": dict(nu_h=100.0, tau_wind=0.3, c_drag=2.0e-3, dx=2.0e4),
}

name = sys.argv[1]
p = CASES[name]
cfg = ExperimentConfig(dx=p["dx"], dy=p["dx"])
cfg = cfg.replace(physics=cfg.physics.replace(
    nu_h=p["nu_h"], tau_wind=p["tau_wind"], c_drag=p["c_drag"]))
grid = cfg.make_grid()
state = initial_state(cfg, grid)
nday = 2880
kes = []
snaps = {}
days = 30
for day in range(days):
    for i in range(nday):
        state = advance(state, grid, cfg.physics, cfg.assim)
    ke = mean_kinetic_energy(state, grid)
    kes.append(ke)
    print(f"[{name}] day {day+1:3d} KE={ke:10.4e} max|u|={np.abs(state.u).max():7.3f}",
          flush=True)
    if day + 1 in (20, 25, 30):
        snaps[day + 1] = state.copy()

def corr(a, b):
    a = a - a.mean(); b = b - b.mean()
    return float(np.sum(a * b) / np.sqrt(np.sum(a * a) * np.sum(b * b)))

u20 = snaps[20].u[0][grid.umask_b]
u25 = snaps[25].u[0][grid.umask_b]
u30 = snaps[30].u[0][grid.umask_b]
print(f"[{name}] corr(20,25)={corr(u20,u25):.3f} corr(20,30)={corr(u20,u30):.3f} "
      f"corr(25,30)={corr(u25,u30):.3f}", flush=True)
tail = np.array(kes[-10:])
print(f"[{name}] KE tail mean={tail.mean():.4e} cv={tail.std()/tail.mean():.4f} "
      f"trend={np.polyfit(np.arange(10), tail, 1)[0]/tail.mean():+.4f}/day", flush=True)
np.savez(f"/root/pkg/.probe/scan_{name}.npz", u=state.u, v=state.v, h=state.h,
         theta=state.theta, sal=state.sal, t=state.t)
