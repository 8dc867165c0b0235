"""Binary state snapshots.

Layout (little-endian): magic "NOCN", format version u32, nx/ny/nz u32,
dx/dy f64, t f64, then u, v, h, theta, sal as row-major layer-major f64,
then the ocean mask as packed bits (little bit order). Round trips are
bit-exact.
"""

import numpy as np

from .errors import BadMagic, TruncatedFile, VersionMismatch
from .state import FIELDS, LayeredState

MAGIC = b"NOCN"
VERSION = 1


def write_snapshot(path, grid, state):
    nz, ny, nx = grid.nz, grid.ny, grid.nx
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(np.array([VERSION, nx, ny, nz], dtype="<u4").tobytes())
        f.write(np.array([grid.dx, grid.dy, state.t], dtype="<f8").tobytes())
        for name in FIELDS:
            f.write(np.ascontiguousarray(getattr(state, name), dtype="<f8").tobytes())
        f.write(np.packbits(grid.mask.reshape(-1), bitorder="little").tobytes())
    return path


def _take(buf, offset, n, path):
    if offset + n > len(buf):
        raise TruncatedFile(f"{path}: needed {offset + n} bytes, file has {len(buf)}")
    return buf[offset:offset + n], offset + n


def read_snapshot_full(path):
    """Returns (LayeredState, meta) with meta holding nx/ny/nz, dx/dy, mask."""
    with open(path, "rb") as f:
        buf = f.read()
    raw, off = _take(buf, 0, 4, path)
    if raw != MAGIC:
        raise BadMagic(f"{path}: bad magic {raw!r}")
    raw, off = _take(buf, off, 16, path)
    version, nx, ny, nz = np.frombuffer(raw, dtype="<u4")
    if version != VERSION:
        raise VersionMismatch(f"{path}: format version {version}, expected {VERSION}")
    raw, off = _take(buf, off, 24, path)
    dx, dy, t = np.frombuffer(raw, dtype="<f8")
    shape = (int(nz), int(ny), int(nx))
    n_bytes = int(nz) * int(ny) * int(nx) * 8
    arrays = {}
    for name in FIELDS:
        raw, off = _take(buf, off, n_bytes, path)
        arrays[name] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
    mask_bytes = (int(nx) * int(ny) + 7) // 8
    raw, off = _take(buf, off, mask_bytes, path)
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8),
                         count=int(nx) * int(ny), bitorder="little")
    mask = bits.astype(bool).reshape(int(ny), int(nx))
    state = LayeredState(t=float(t), **arrays)
    meta = {"nx": int(nx), "ny": int(ny), "nz": int(nz),
            "dx": float(dx), "dy": float(dy), "mask": mask}
    return state, meta


def read_snapshot(path):
    return read_snapshot_full(path)[0]
