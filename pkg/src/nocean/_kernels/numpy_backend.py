"""NumPy reference implementation of the stencil kernels.

All functions take 2-D float64 arrays shaped (ny, nx) plus scalar metadata
and return freshly allocated arrays. Staggering convention:

    u[j, i]  lives on the west face of cell (j, i)
    v[j, i]  lives on the south face of cell (j, i)
    vertices sit at the southwest corner of cell (j, i)

Shifts wrap when the axis is periodic and fill with 0.0 otherwise, which
encodes no-normal-flow through land/domain boundaries.

The compiled backend mirrors the floating-point evaluation order used here
term by term, so both backends produce equal results (==, not almost-equal).
"""

import numpy as np


def _east(a, px):
    if px:
        return np.roll(a, -1, axis=1)
    out = np.zeros_like(a)
    out[:, :-1] = a[:, 1:]
    return out


def _west(a, px):
    if px:
        return np.roll(a, 1, axis=1)
    out = np.zeros_like(a)
    out[:, 1:] = a[:, :-1]
    return out


def _north(a, py):
    if py:
        return np.roll(a, -1, axis=0)
    out = np.zeros_like(a)
    out[:-1, :] = a[1:, :]
    return out


def _south(a, py):
    if py:
        return np.roll(a, 1, axis=0)
    out = np.zeros_like(a)
    out[1:, :] = a[:-1, :]
    return out


def avg_v_to_u(v, px, py):
    """Four-point average of v onto u-face points."""
    w = _west(v, px)
    return ((w + v) + (_north(w, py) + _north(v, py))) * 0.25


def avg_u_to_v(u, px, py):
    """Four-point average of u onto v-face points."""
    s = _south(u, py)
    e = _east(u, px)
    return ((s + u) + (_south(e, py) + e)) * 0.25


def avg_c_to_u(c, px):
    return (_west(c, px) + c) * 0.5


def avg_c_to_v(c, py):
    return (_south(c, py) + c) * 0.5


def avg_u_to_c(u, px):
    return (u + _east(u, px)) * 0.5


def avg_v_to_c(v, py):
    return (v + _north(v, py)) * 0.5


def avg_vertex_to_u(q, py):
    return (q + _north(q, py)) * 0.5


def avg_vertex_to_v(q, px):
    return (q + _east(q, px)) * 0.5


def grad_x(c, dx, px):
    """Center-to-u-face x derivative."""
    return (c - _west(c, px)) / dx


def grad_y(c, dy, py):
    """Center-to-v-face y derivative."""
    return (c - _south(c, py)) / dy


def div(fx, fy, dx, dy, px, py):
    """Divergence of face fluxes at cell centers."""
    return (_east(fx, px) - fx) / dx + (_north(fy, py) - fy) / dy


def vorticity(u, v, dx, dy, px, py):
    """dv/dx - du/dy at vertices (southwest corners)."""
    return (v - _west(v, px)) / dx - (u - _south(u, py)) / dy


def ke_centers(u, v, px, py):
    """|u|^2 / 2 at centers from face-squared averages."""
    ue = _east(u, px)
    vn = _north(v, py)
    return ((u * u + ue * ue) * 0.5 + (v * v + vn * vn) * 0.5) * 0.5


def upwind_to_u(c, u, px):
    """First-order upwind value of a center field at u faces."""
    return np.where(u > 0.0, _west(c, px), c)


def upwind_to_v(c, v, py):
    return np.where(v > 0.0, _south(c, py), c)


def laplace_u(u, act, dx2, dy2, px, py):
    """Flux-form Laplacian on the u-face lattice.

    act is the float face mask; fluxes toward inactive neighbors vanish,
    which realizes free-slip at land and domain boundaries.
    """
    fxw = _west(act, px) * (_west(u, px) - u)
    fxe = _east(act, px) * (_east(u, px) - u)
    fys = _south(act, py) * (_south(u, py) - u)
    fyn = _north(act, py) * (_north(u, py) - u)
    return act * ((fxw + fxe) / dx2 + (fys + fyn) / dy2)


def laplace_c(c, wx, wy, dx, dy, px, py):
    """div(w grad c) at centers with prescribed face weights.

    wx, wy must already be zero on inactive faces (no flux through land).
    """
    gx = wx * ((c - _west(c, px)) / dx)
    gy = wy * ((c - _south(c, py)) / dy)
    return (_east(gx, px) - gx) / dx + (_north(gy, py) - gy) / dy


def flood_fill(values, seeded, domain, px, py):
    """Breadth-first fill with previous-iteration conflict averaging.

    Cells adjacent to the frontier assigned in iteration n receive, in
    iteration n+1, the arithmetic mean of their frontier neighbors. Seeded
    cells keep their values exactly. Returns (filled, complete, levels):
    complete is False when unassigned domain cells remain unreachable, and
    levels holds the assignment iteration (0 for seeds, -1 outside).
    """
    filled = np.where(seeded, values, 0.0)
    levels = np.where(seeded, np.int32(0), np.int32(-1))
    assigned = seeded.copy()
    frontier = seeded.copy()
    level = 0
    while True:
        todo = domain & ~assigned
        if not todo.any():
            return filled, True, levels
        if not frontier.any():
            return filled, False, levels
        level += 1
        fvals = np.where(frontier, filled, 0.0)
        fcnt = frontier.astype(np.float64)
        nsum = (_west(fvals, px) + _east(fvals, px)) + (
            _south(fvals, py) + _north(fvals, py)
        )
        ncnt = (_west(fcnt, px) + _east(fcnt, px)) + (
            _south(fcnt, py) + _north(fcnt, py)
        )
        new = todo & (ncnt > 0.0)
        if not new.any():
            return filled, False, levels
        filled = np.where(new, nsum / np.maximum(ncnt, 1.0), filled)
        levels = np.where(new, np.int32(level), levels)
        assigned |= new
        frontier = new
