"""Planar Arakawa C-grid with land mask and layered bathymetry.

Scalars (h, theta, sal, p) live at cell centers, u on west faces, v on
south faces. A face is active when both adjacent cells are ocean; faces on
non-periodic domain edges are inactive, so no-normal-flow is built into the
indexing. The ocean region must be a single 4-connected component so the
flood-fill interpolant can reach every cell.
"""

import hashlib
from typing import NamedTuple

import numpy as np

from .errors import BadDimension, DisconnectedOcean, ValidationError

MIN_NX = 4
MIN_NY = 4
MIN_NZ = 1


class CellIndex(NamedTuple):
    i: int
    j: int
    k: int = 0


class Grid:
    def __init__(self, nx, ny, nz, dx, dy, mask, bottom_depth,
                 periodic_x=False, periodic_y=False):
        if nx < MIN_NX or ny < MIN_NY or nz < MIN_NZ:
            raise BadDimension(
                f"grid needs nx >= {MIN_NX}, ny >= {MIN_NY}, nz >= {MIN_NZ}, "
                f"got ({nx}, {ny}, {nz})")
        if dx <= 0.0 or dy <= 0.0:
            raise BadDimension(f"cell sizes must be positive, got ({dx}, {dy})")
        mask = np.asarray(mask, dtype=bool)
        bottom_depth = np.asarray(bottom_depth, dtype=np.float64)
        if mask.shape != (ny, nx) or bottom_depth.shape != (ny, nx):
            raise BadDimension("mask/bottom_depth must be shaped (ny, nx)")
        if not mask.any():
            raise DisconnectedOcean("mask contains no ocean cells")
        if np.any(bottom_depth[mask] <= 0.0):
            raise ValidationError("bottom_depth must be positive on ocean cells")

        self.nx = int(nx)
        self.ny = int(ny)
        self.nz = int(nz)
        self.dx = float(dx)
        self.dy = float(dy)
        self.periodic_x = bool(periodic_x)
        self.periodic_y = bool(periodic_y)
        self.mask = mask.copy()
        self.bottom_depth = np.where(mask, bottom_depth, 0.0)

        west = self._shift_bool(mask, 0, -1)
        south = self._shift_bool(mask, -1, 0)
        self.umask_b = mask & west
        self.vmask_b = mask & south
        self.cmask = mask.astype(np.float64)
        self.umask = self.umask_b.astype(np.float64)
        self.vmask = self.vmask_b.astype(np.float64)
        self.n_ocean = int(mask.sum())
        self.cell_area = self.dx * self.dy

        self._check_connected()
        for a in (self.mask, self.bottom_depth, self.umask_b, self.vmask_b,
                  self.cmask, self.umask, self.vmask):
            a.flags.writeable = False
        self._hash = None
        self._slopes = None

    def _shift_bool(self, m, dj, di):
        """mask value of the neighbor at (j+dj, i+di), False outside."""
        out = np.zeros_like(m)
        if di:
            if self.periodic_x:
                out = np.roll(m, -di, axis=1)
            elif di < 0:
                out[:, 1:] = m[:, :-1]
            else:
                out[:, :-1] = m[:, 1:]
            return out
        if self.periodic_y:
            return np.roll(m, -dj, axis=0)
        if dj < 0:
            out[1:, :] = m[:-1, :]
        else:
            out[:-1, :] = m[1:, :]
        return out

    def neighbors(self, i, j):
        """4-connected ocean neighbors of cell (i, j) as (i, j) pairs."""
        if not (0 <= i < self.nx and 0 <= j < self.ny):
            raise IndexError(f"cell ({i}, {j}) out of range")
        out = []
        for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            ii, jj = i + di, j + dj
            if self.periodic_x:
                ii %= self.nx
            elif not 0 <= ii < self.nx:
                continue
            if self.periodic_y:
                jj %= self.ny
            elif not 0 <= jj < self.ny:
                continue
            if self.mask[jj, ii]:
                out.append((ii, jj))
        return out

    def _check_connected(self):
        reach = flood_reach(self.mask, self.periodic_x, self.periodic_y)
        if reach != self.n_ocean:
            raise DisconnectedOcean(
                f"ocean region is disconnected ({reach} of {self.n_ocean} "
                "cells reachable)")

    @property
    def hash(self):
        if self._hash is None:
            h = hashlib.sha256()
            h.update(np.array([self.nx, self.ny, self.nz], np.int64).tobytes())
            h.update(np.array([self.dx, self.dy], np.float64).tobytes())
            h.update(bytes([self.periodic_x, self.periodic_y]))
            h.update(np.packbits(self.mask).tobytes())
            h.update(self.bottom_depth.tobytes())
            self._hash = h.hexdigest()
        return self._hash

    @property
    def bottom_slope(self):
        """Normalized |grad bottom_depth| at u and v faces; 0 on flat floors."""
        if self._slopes is None:
            H = self.bottom_depth
            gw = np.zeros_like(H)
            if self.periodic_x:
                gw = np.abs(H - np.roll(H, 1, axis=1)) / self.dx
            else:
                gw[:, 1:] = np.abs(H[:, 1:] - H[:, :-1]) / self.dx
            gs = np.zeros_like(H)
            if self.periodic_y:
                gs = np.abs(H - np.roll(H, 1, axis=0)) / self.dy
            else:
                gs[1:, :] = np.abs(H[1:, :] - H[:-1, :]) / self.dy
            gw = gw * self.umask
            gs = gs * self.vmask
            m = max(gw.max(), gs.max())
            if m > 0.0:
                gw = gw / m
                gs = gs / m
            gw.flags.writeable = False
            gs.flags.writeable = False
            self._slopes = (gw, gs)
        return self._slopes


def flood_reach(mask, periodic_x, periodic_y):
    """Number of ocean cells reachable from the first ocean cell."""
    ny, nx = mask.shape
    seen = np.zeros_like(mask)
    jj, ii = np.argwhere(mask)[0]
    stack = [(jj, ii)]
    seen[jj, ii] = True
    count = 0
    while stack:
        j, i = stack.pop()
        count += 1
        for dj, di in ((0, -1), (0, 1), (-1, 0), (1, 0)):
            j2, i2 = j + dj, i + di
            if periodic_y:
                j2 %= ny
            elif not 0 <= j2 < ny:
                continue
            if periodic_x:
                i2 %= nx
            elif not 0 <= i2 < nx:
                continue
            if mask[j2, i2] and not seen[j2, i2]:
                seen[j2, i2] = True
                stack.append((j2, i2))
    return count


def _coastline_mask(nx, ny, seed, periodic_x, periodic_y):
    """Seeded procedural coastline: smooth random field thresholded to ~70%
    ocean, reduced to its largest connected component."""
    rng = np.random.default_rng(seed)
    jj, ii = np.meshgrid(np.arange(ny), np.arange(nx), indexing="ij")
    field = np.zeros((ny, nx))
    for _ in range(6):
        kx = rng.integers(1, 5)
        ky = rng.integers(1, 5)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        amp = rng.uniform(0.5, 1.0)
        field += amp * np.cos(2.0 * np.pi * (kx * ii / nx + ky * jj / ny) + phase)
    ocean = field <= np.quantile(field, 0.70)
    if not periodic_x:
        ocean[:, 0] = ocean[:, -1] = False
    if not periodic_y:
        ocean[0, :] = ocean[-1, :] = False
    if not ocean.any():
        ocean[ny // 2, nx // 2] = True
    # keep the largest component, everything else becomes land
    labels = np.full(ocean.shape, -1, dtype=np.int32)
    sizes = []
    for j0, i0 in np.argwhere(ocean):
        if labels[j0, i0] >= 0:
            continue
        label = len(sizes)
        stack = [(j0, i0)]
        labels[j0, i0] = label
        n = 0
        while stack:
            j, i = stack.pop()
            n += 1
            for dj, di in ((0, -1), (0, 1), (-1, 0), (1, 0)):
                j2, i2 = j + dj, i + di
                if periodic_y:
                    j2 %= ny
                elif not 0 <= j2 < ny:
                    continue
                if periodic_x:
                    i2 %= nx
                elif not 0 <= i2 < nx:
                    continue
                if ocean[j2, i2] and labels[j2, i2] < 0:
                    labels[j2, i2] = label
                    stack.append((j2, i2))
        sizes.append(n)
    return labels == int(np.argmax(sizes))


def _parse_spec(spec, kinds):
    parts = str(spec).split(":")
    kind = parts[0]
    if kind not in kinds:
        raise ValidationError(f"unknown spec kind {kind!r}, expected one of {kinds}")
    return kind, parts[1:]


def build_mask(nx, ny, mask_spec, periodic_x=False, periodic_y=False):
    if isinstance(mask_spec, np.ndarray):
        return np.asarray(mask_spec, dtype=bool)
    kind, args = _parse_spec(mask_spec, ("all_ocean", "basin", "coastline"))
    if kind == "all_ocean":
        return np.ones((ny, nx), dtype=bool)
    if kind == "basin":
        border = int(args[0]) if args else 2
        if 2 * border >= min(nx, ny):
            raise BadDimension(f"basin border {border} leaves no ocean")
        m = np.zeros((ny, nx), dtype=bool)
        m[border:ny - border, border:nx - border] = True
        return m
    seed = int(args[0]) if args else 0
    return _coastline_mask(nx, ny, seed, periodic_x, periodic_y)


def build_depth(nx, ny, mask, depth_spec):
    if isinstance(depth_spec, np.ndarray):
        return np.asarray(depth_spec, dtype=np.float64)
    kind, args = _parse_spec(depth_spec, ("flat", "ridge"))
    if kind == "flat":
        h = float(args[0]) if args else 1000.0
        return np.where(mask, h, 0.0)
    hmin = float(args[0]) if len(args) > 0 else 500.0
    hmax = float(args[1]) if len(args) > 1 else 1500.0
    if not 0.0 < hmin <= hmax:
        raise ValidationError(f"ridge needs 0 < hmin <= hmax, got ({hmin}, {hmax})")
    i = np.arange(nx, dtype=np.float64)
    ridge = np.exp(-(((i - 0.5 * (nx - 1)) / (nx / 8.0)) ** 2))
    depth = hmax - (hmax - hmin) * ridge
    return np.where(mask, np.broadcast_to(depth, (ny, nx)), 0.0)


def build_grid(nx, ny, nz, dx, dy, mask_spec="all_ocean", depth_spec="flat:1000",
               periodic_x=False, periodic_y=False):
    """Construct a Grid from procedural mask/depth specs or explicit arrays.

    mask_spec: "all_ocean", "basin[:border]", "coastline:seed", or a bool array.
    depth_spec: "flat[:H]", "ridge[:hmin[:hmax]]", or a float array.
    """
    mask = build_mask(nx, ny, mask_spec, periodic_x, periodic_y)
    depth = build_depth(nx, ny, mask, depth_spec)
    return Grid(nx, ny, nz, dx, dy, mask, depth, periodic_x, periodic_y)


def neighbors(grid, i, j):
    return grid.neighbors(i, j)
