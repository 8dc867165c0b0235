"""CSV outputs and the run manifest.

All floats are written with 17 significant digits so files round-trip
losslessly; the manifest isolates its timestamp to a single line so
otherwise identical runs produce byte-identical output directories.
"""

import datetime
import os

import numpy as np

from .errors import ValidationError
from .experiment import ErrorSeries

ERROR_HEADER = "t_seconds,rms_ke,rms_vel,rms_theta,rms_sal"


def _f(x):
    return format(float(x), ".17g")


def write_error_csv(path, series):
    with open(path, "w", encoding="utf-8") as f:
        f.write(ERROR_HEADER + "\n")
        for i in range(len(series.times)):
            f.write(",".join(_f(v) for v in (
                series.times[i], series.rms_ke[i], series.rms_vel[i],
                series.rms_theta[i], series.rms_sal[i])) + "\n")
    return path


def read_error_csv(path):
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if header != ERROR_HEADER:
            raise ValidationError(f"{path}: unexpected header {header!r}")
        rows = [[float(x) for x in line.strip().split(",")]
                for line in f if line.strip()]
    arr = np.asarray(rows) if rows else np.empty((0, 5))
    return ErrorSeries(times=arr[:, 0], rms_ke=arr[:, 1], rms_vel=arr[:, 2],
                       rms_theta=arr[:, 3], rms_sal=arr[:, 4])


def write_ablation_csv(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        f.write("trial,explicit,semi_implicit\n")
        for row in rows:
            f.write(f"{row.name},{_f(row.plateau['explicit'])},"
                    f"{_f(row.plateau['semi_implicit'])}\n")
    return path


def write_sweep_csv(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        f.write("axis,value,min_rms_ke,plateau_rms_ke,plateau_rms_vel,"
                "plateau_rms_theta,plateau_rms_sal\n")
        for r in rows:
            f.write(",".join([r.axis, _f(r.value), _f(r.min_rms_ke),
                              _f(r.plateau_ke), _f(r.plateau_vel),
                              _f(r.plateau_theta), _f(r.plateau_sal)]) + "\n")
    return path


class RunManifest:
    """Written before any run output; every emitted file is appended."""

    def __init__(self, out_dir, command, config_items, grid_hash, seed,
                 version, kernel_backend):
        self.path = os.path.join(out_dir, "manifest.txt")
        self.out_dir = out_dir
        with open(self.path, "w", encoding="utf-8") as f:
            f.write("# nocean run manifest\n")
            f.write(f"timestamp = {datetime.datetime.now().isoformat()}\n")
            f.write(f"command = {command}\n")
            f.write(f"version = {version}\n")
            f.write(f"kernel_backend = {kernel_backend}\n")
            f.write(f"seed = {seed}\n")
            f.write(f"grid_hash = {grid_hash}\n")
            for key, value in config_items:
                f.write(f"config.{key} = {value}\n")

    def emit(self, name):
        """Record an output file (name relative to the run directory)."""
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(f"output = {name}\n")
        return os.path.join(self.out_dir, name)
