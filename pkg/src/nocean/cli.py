"""Command-line entry points for the experiment campaigns."""

import argparse
import os
import sys

import numpy as np

from . import KERNEL_BACKEND, __version__
from .config import config_items, parse_config
from .errors import (BadDimension, DeltaTooLarge, EmptyMask, NoceanError,
                     ParseError, ValidationError)
from .experiment import (init_twin, run_ablation, run_reference, run_sweep,
                         run_twin, spin_up, validation_suite)
from .interpolant import build_obs_mask
from .observations import ObservationStore, record_snapshot
from .runio import RunManifest, write_ablation_csv, write_error_csv, write_sweep_csv
from .snapio import read_snapshot, write_snapshot

_CONFIG_ERRORS = (ParseError, ValidationError, BadDimension, DeltaTooLarge,
                  EmptyMask)


def _build_parser():
    p = argparse.ArgumentParser(
        prog="nocean",
        description="Desk-scale layered ocean twin-experiment lab with AOT "
                    "nudging assimilation.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="flat key-value config file")
        sp.add_argument("--out", default="nocean_out", help="output directory")
        sp.add_argument("--seed", type=int, help="override experiment.seed")
        sp.add_argument("--override-stability", action="store_true",
                        help="run despite failed stability checks")

    common(sub.add_parser("spinup", help="spin up and save the base state"))
    sp = sub.add_parser("reference", help="free reference run with observations")
    common(sp)
    sp.add_argument("--state", help="snapshot to start from (skips spin-up)")
    sp = sub.add_parser("assimilate", help="twin run assimilating observations")
    common(sp)
    sp.add_argument("--state", help="snapshot to start the pipeline from")
    sp.add_argument("--obs", help="observation directory from a reference run")
    common(sub.add_parser("ablate", help="term-toggle ablation table"))
    sp = sub.add_parser("sweep", help="parameter sweep campaign")
    common(sp)
    sp.add_argument("--axis", required=True,
                    choices=("mu", "dt_obs", "delta", "tracers"))
    sp.add_argument("--values", required=True,
                    help="comma-separated sweep values")
    common(sub.add_parser("validate", help="static-state and scheme checks"))
    return p


def _load_config(args):
    if args.config:
        with open(args.config, "r", encoding="utf-8") as f:
            from .experiment import ExperimentConfig  # noqa: F401
            cfg = parse_config(f.read())
    else:
        from .experiment import ExperimentConfig
        cfg = ExperimentConfig().validate()
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    if args.override_stability:
        cfg = cfg.replace(assim=cfg.assim.replace(override_stability=True))
    return cfg


def _manifest(args, cfg, grid):
    os.makedirs(args.out, exist_ok=True)
    return RunManifest(args.out, args.command, config_items(cfg), grid.hash,
                       cfg.seed, __version__, KERNEL_BACKEND)


def _echo(msg):
    print(msg, flush=True)


def _cmd_spinup(args, cfg):
    grid = cfg.make_grid()
    man = _manifest(args, cfg, grid)
    history = []
    state = spin_up(cfg, grid, history=history)
    path = man.emit("spun_state.bin")
    write_snapshot(path, grid, state)
    ke_path = man.emit("spinup_ke.csv")
    with open(ke_path, "w", encoding="utf-8") as f:
        f.write("t_seconds,mean_ke\n")
        for t, ke in history:
            f.write(f"{t:.17g},{ke:.17g}\n")
    _echo(f"spun state written to {path} (t = {state.t:.0f} s)")
    return 0


def _obs_dir_paths(obs_dir):
    meta = os.path.join(obs_dir, "obs_meta.txt")
    if not os.path.exists(meta):
        raise ValidationError(f"{obs_dir} has no obs_meta.txt")
    with open(meta, "r", encoding="utf-8") as f:
        kv = dict(line.strip().split(" = ", 1) for line in f if " = " in line)
    n = int(kv["n_snapshots"])
    files = [os.path.join(obs_dir, f"obs_{i:06d}.bin") for i in range(n)]
    return kv, files


def _cmd_reference(args, cfg):
    grid = cfg.make_grid()
    man = _manifest(args, cfg, grid)
    if args.state:
        state = read_snapshot(args.state)
    else:
        state = spin_up(cfg, grid)
    final, store = run_reference(cfg, grid, state)
    for i, (t, full) in enumerate(zip(store.times, store.full_states)):
        path = man.emit(f"obs_{i:06d}.bin")
        write_snapshot(path, grid, full)
    path = man.emit("obs_meta.txt")
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"dt_obs = {store.dt_obs:.17g}\n")
        f.write(f"delta = {store.mask.delta}\n")
        f.write(f"edge_based = {store.edge_based}\n")
        f.write(f"n_snapshots = {len(store.times)}\n")
        f.write(f"grid_hash = {store.grid_hash}\n")
    final_path = man.emit("reference_final.bin")
    write_snapshot(final_path, grid, final)
    _echo(f"recorded {len(store.times)} snapshots every {store.dt_obs:.0f} s")
    return 0


def _rebuild_store(cfg, grid, obs_dir):
    kv, files = _obs_dir_paths(obs_dir)
    if kv["grid_hash"] != grid.hash:
        raise ValidationError("observation directory was made on a different grid")
    mask = build_obs_mask(grid, int(kv["delta"]), cfg.region,
                          cfg.assim.delta_max)
    store = ObservationStore(dt_obs=float(kv["dt_obs"]), mask=mask,
                             edge_based=kv["edge_based"] == "True",
                             store_full=True, grid_hash=grid.hash)
    for path in files:
        state = read_snapshot(path)
        record_snapshot(store, state.t, state, grid)
    return store


def _cmd_assimilate(args, cfg):
    grid = cfg.make_grid()
    man = _manifest(args, cfg, grid)
    if args.obs:
        store = _rebuild_store(cfg, grid, args.obs)
        twin0 = init_twin(cfg, store, store.full_states[-1])
    else:
        state = read_snapshot(args.state) if args.state else spin_up(cfg, grid)
        final, store = run_reference(cfg, grid, state)
        twin0 = init_twin(cfg, store, final)
    series = run_twin(cfg, grid, store, twin0)
    path = man.emit("errors.csv")
    write_error_csv(path, series)
    _echo(f"min rms_ke = {series.min_rms_ke:.6e}, "
          f"plateau rms_vel = {series.plateau('rms_vel'):.6e}")
    return 0


def _slug(text):
    return str(text).lower().replace(" ", "_")


def _cmd_ablate(args, cfg):
    grid = cfg.make_grid()
    man = _manifest(args, cfg, grid)
    rows = run_ablation(cfg, grid, progress=_echo)
    path = man.emit("ablation.csv")
    write_ablation_csv(path, rows)
    for row in rows:
        for scheme, series in row.series.items():
            p = man.emit(f"errors_{_slug(row.name)}_{scheme}.csv")
            write_error_csv(p, series)
    _echo(f"ablation table written to {path}")
    return 0


def _cmd_sweep(args, cfg):
    grid = cfg.make_grid()
    man = _manifest(args, cfg, grid)
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    rows = run_sweep(cfg, args.axis, values, grid, progress=_echo)
    for row in rows:
        p = man.emit(f"errors_{args.axis}_{row.value:g}.csv")
        write_error_csv(p, row.series)
    path = man.emit("sweep_summary.csv")
    write_sweep_csv(path, rows)
    _echo(f"sweep summary written to {path}")
    return 0


def _cmd_validate(args, cfg):
    grid = cfg.make_grid()
    _manifest(args, cfg, grid)
    results = validation_suite(cfg, grid, progress=_echo)
    return 0 if all(r.passed for r in results) else 2


_COMMANDS = {
    "spinup": _cmd_spinup,
    "reference": _cmd_reference,
    "assimilate": _cmd_assimilate,
    "ablate": _cmd_ablate,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
}


def cli_dispatch(argv):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        cfg = _load_config(args)
        return _COMMANDS[args.command](args, cfg)
    except _CONFIG_ERRORS as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except NoceanError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"IoError: {e}", file=sys.stderr)
        return 2


def main(argv=None):
    return cli_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
