"""Benchmark the compiled kernels against the NumPy fallback.

Times the full-physics model step and the flood-fill interpolant on the
default 64x64x3 setup for both backends and prints a comparison table.

Run:  python benchmarks/bench_kernels.py [n_steps]
"""

import importlib
import sys
import time

import numpy as np


def _use_backend(name):
    import nocean._kernels as kern

    impl = importlib.import_module(f"nocean._kernels.{name}")
    for fn in ("avg_v_to_u", "avg_u_to_v", "avg_c_to_u", "avg_c_to_v",
               "avg_u_to_c", "avg_v_to_c", "avg_vertex_to_u", "avg_vertex_to_v",
               "grad_x", "grad_y", "div", "vorticity", "ke_centers",
               "upwind_to_u", "upwind_to_v", "laplace_u", "laplace_c",
               "flood_fill"):
        setattr(kern, fn, getattr(impl, fn))


def bench_steps(n_steps):
    from nocean.assimilation import advance
    from nocean.experiment import ExperimentConfig, initial_state

    cfg = ExperimentConfig()
    grid = cfg.make_grid()
    state = initial_state(cfg, grid)
    for _ in range(20):
        state = advance(state, grid, cfg.physics, cfg.assim)
    t0 = time.perf_counter()
    for _ in range(n_steps):
        state = advance(state, grid, cfg.physics, cfg.assim)
    return (time.perf_counter() - t0) / n_steps


def bench_flood_fill(n_calls):
    from nocean.experiment import ExperimentConfig
    from nocean.interpolant import build_obs_mask, flood_fill

    cfg = ExperimentConfig()
    grid = cfg.make_grid()
    mask = build_obs_mask(grid, 3)
    rng = np.random.default_rng(0)
    vals = np.where(mask.selected, rng.standard_normal((grid.ny, grid.nx)), 0.0)
    flood_fill(grid, mask, vals)
    t0 = time.perf_counter()
    for _ in range(n_calls):
        flood_fill(grid, mask, vals)
    return (time.perf_counter() - t0) / n_calls


def main():
    n_steps = int(sys.argv[1]) if len(sys.argv) > 1 else 400
    results = {}
    for backend in ("numpy_backend", "_core"):
        try:
            _use_backend(backend)
        except ImportError:
            print(f"{backend}: not available, skipping")
            continue
        step = bench_steps(n_steps)
        fill = bench_flood_fill(10 * n_steps)
        results[backend] = (step, fill)
        print(f"{backend:14s}  model step: {1e3 * step:7.3f} ms   "
              f"flood fill (delta=3): {1e6 * fill:8.1f} us")
    if len(results) == 2:
        s = results["numpy_backend"][0] / results["_core"][0]
        f = results["numpy_backend"][1] / results["_core"][1]
        print(f"speedup (compiled vs numpy): step x{s:.2f}, flood fill x{f:.2f}")


if __name__ == "__main__":
    main()
