# cython: language_level=3
"""Compiled stencil kernels.

Mirrors numpy_backend function by function with identical per-element
floating-point evaluation order, so the two backends agree under == (the
parity tests assert this). Keep the expression groupings in sync with the
numpy source when editing either side.
"""

import numpy as np

cimport numpy as cnp


cdef inline Py_ssize_t _w(Py_ssize_t i, Py_ssize_t n, bint p) noexcept nogil:
    if i > 0:
        return i - 1
    return n - 1 if p else -1


cdef inline Py_ssize_t _e(Py_ssize_t i, Py_ssize_t n, bint p) noexcept nogil:
    if i < n - 1:
        return i + 1
    return 0 if p else -1


cdef inline double _get(const double[:, ::1] a, Py_ssize_t j, Py_ssize_t i) noexcept nogil:
    if j < 0 or i < 0:
        return 0.0
    return a[j, i]


cdef _as_f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def avg_v_to_u(v, bint px, bint py):
    cdef const double[:, ::1] a = _as_f64(v)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j, iw, jn
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        jn = _e(j, ny, py)
        for i in range(nx):
            iw = _w(i, nx, px)
            o[j, i] = ((_get(a, j, iw) + a[j, i])
                       + (_get(a, jn, iw) + _get(a, jn, i))) * 0.25
    return out


def avg_u_to_v(u, bint px, bint py):
    cdef const double[:, ::1] a = _as_f64(u)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j, ie, js
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        js = _w(j, ny, py)
        for i in range(nx):
            ie = _e(i, nx, px)
            o[j, i] = ((_get(a, js, i) + a[j, i])
                       + (_get(a, js, ie) + _get(a, j, ie))) * 0.25
    return out


def avg_c_to_u(c, bint px):
    cdef const double[:, ::1] a = _as_f64(c)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (_get(a, j, _w(i, nx, px)) + a[j, i]) * 0.5
    return out


def avg_c_to_v(c, bint py):
    cdef const double[:, ::1] a = _as_f64(c)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (_get(a, _w(j, ny, py), i) + a[j, i]) * 0.5
    return out


def avg_u_to_c(u, bint px):
    cdef const double[:, ::1] a = _as_f64(u)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (a[j, i] + _get(a, j, _e(i, nx, px))) * 0.5
    return out


def avg_v_to_c(v, bint py):
    cdef const double[:, ::1] a = _as_f64(v)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (a[j, i] + _get(a, _e(j, ny, py), i)) * 0.5
    return out


def avg_vertex_to_u(q, bint py):
    cdef const double[:, ::1] a = _as_f64(q)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (a[j, i] + _get(a, _e(j, ny, py), i)) * 0.5
    return out


def avg_vertex_to_v(q, bint px):
    cdef const double[:, ::1] a = _as_f64(q)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (a[j, i] + _get(a, j, _e(i, nx, px))) * 0.5
    return out


def grad_x(c, double dx, bint px):
    cdef const double[:, ::1] a = _as_f64(c)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (a[j, i] - _get(a, j, _w(i, nx, px))) / dx
    return out


def grad_y(c, double dy, bint py):
    cdef const double[:, ::1] a = _as_f64(c)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (a[j, i] - _get(a, _w(j, ny, py), i)) / dy
    return out


def div(fx, fy, double dx, double dy, bint px, bint py):
    cdef const double[:, ::1] ax = _as_f64(fx)
    cdef const double[:, ::1] ay = _as_f64(fy)
    cdef Py_ssize_t ny = ax.shape[0], nx = ax.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (_get(ax, j, _e(i, nx, px)) - ax[j, i]) / dx \
                + (_get(ay, _e(j, ny, py), i) - ay[j, i]) / dy
    return out


def vorticity(u, v, double dx, double dy, bint px, bint py):
    cdef const double[:, ::1] au = _as_f64(u)
    cdef const double[:, ::1] av = _as_f64(v)
    cdef Py_ssize_t ny = au.shape[0], nx = au.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (av[j, i] - _get(av, j, _w(i, nx, px))) / dx \
                - (au[j, i] - _get(au, _w(j, ny, py), i)) / dy
    return out


def ke_centers(u, v, bint px, bint py):
    cdef const double[:, ::1] au = _as_f64(u)
    cdef const double[:, ::1] av = _as_f64(v)
    cdef Py_ssize_t ny = au.shape[0], nx = au.shape[1], i, j
    cdef double ue, vn
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            ue = _get(au, j, _e(i, nx, px))
            vn = _get(av, _e(j, ny, py), i)
            o[j, i] = ((au[j, i] * au[j, i] + ue * ue) * 0.5
                       + (av[j, i] * av[j, i] + vn * vn) * 0.5) * 0.5
    return out


def upwind_to_u(c, u, bint px):
    cdef const double[:, ::1] ac = _as_f64(c)
    cdef const double[:, ::1] au = _as_f64(u)
    cdef Py_ssize_t ny = ac.shape[0], nx = ac.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            if au[j, i] > 0.0:
                o[j, i] = _get(ac, j, _w(i, nx, px))
            else:
                o[j, i] = ac[j, i]
    return out


def upwind_to_v(c, v, bint py):
    cdef const double[:, ::1] ac = _as_f64(c)
    cdef const double[:, ::1] av = _as_f64(v)
    cdef Py_ssize_t ny = ac.shape[0], nx = ac.shape[1], i, j
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        for i in range(nx):
            if av[j, i] > 0.0:
                o[j, i] = _get(ac, _w(j, ny, py), i)
            else:
                o[j, i] = ac[j, i]
    return out


def laplace_u(u, act, double dx2, double dy2, bint px, bint py):
    cdef const double[:, ::1] a = _as_f64(u)
    cdef const double[:, ::1] m = _as_f64(act)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j, iw, ie, js, jn
    cdef double fxw, fxe, fys, fyn
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    for j in range(ny):
        js = _w(j, ny, py)
        jn = _e(j, ny, py)
        for i in range(nx):
            iw = _w(i, nx, px)
            ie = _e(i, nx, px)
            fxw = _get(m, j, iw) * (_get(a, j, iw) - a[j, i])
            fxe = _get(m, j, ie) * (_get(a, j, ie) - a[j, i])
            fys = _get(m, js, i) * (_get(a, js, i) - a[j, i])
            fyn = _get(m, jn, i) * (_get(a, jn, i) - a[j, i])
            o[j, i] = m[j, i] * ((fxw + fxe) / dx2 + (fys + fyn) / dy2)
    return out


def laplace_c(c, wx, wy, double dx, double dy, bint px, bint py):
    cdef const double[:, ::1] a = _as_f64(c)
    cdef const double[:, ::1] awx = _as_f64(wx)
    cdef const double[:, ::1] awy = _as_f64(wy)
    cdef Py_ssize_t ny = a.shape[0], nx = a.shape[1], i, j
    gx_arr = np.empty((ny, nx))
    gy_arr = np.empty((ny, nx))
    cdef double[:, ::1] gx = gx_arr
    cdef double[:, ::1] gy = gy_arr
    for j in range(ny):
        for i in range(nx):
            gx[j, i] = awx[j, i] * ((a[j, i] - _get(a, j, _w(i, nx, px))) / dx)
            gy[j, i] = awy[j, i] * ((a[j, i] - _get(a, _w(j, ny, py), i)) / dy)
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    cdef const double[:, ::1] cgx = gx_arr
    cdef const double[:, ::1] cgy = gy_arr
    for j in range(ny):
        for i in range(nx):
            o[j, i] = (_get(cgx, j, _e(i, nx, px)) - cgx[j, i]) / dx \
                + (_get(cgy, _e(j, ny, py), i) - cgy[j, i]) / dy
    return out


def flood_fill(values, seeded, domain, bint px, bint py):
    """Level-synchronous BFS fill with previous-ring averaging; see the
    numpy backend for the contract."""
    cdef const double[:, ::1] vals = _as_f64(values)
    seeded_u8 = np.ascontiguousarray(seeded, dtype=np.uint8)
    domain_u8 = np.ascontiguousarray(domain, dtype=np.uint8)
    cdef const unsigned char[:, ::1] seed = seeded_u8
    cdef const unsigned char[:, ::1] dom = domain_u8
    cdef Py_ssize_t ny = vals.shape[0], nx = vals.shape[1], i, j, iw, ie, js, jn
    filled_arr = np.zeros((ny, nx))
    levels_arr = np.full((ny, nx), -1, dtype=np.int32)
    frontier_arr = np.zeros((ny, nx), dtype=np.uint8)
    newmask_arr = np.zeros((ny, nx), dtype=np.uint8)
    newvals_arr = np.zeros((ny, nx))
    assigned_arr = np.zeros((ny, nx), dtype=np.uint8)
    cdef double[:, ::1] filled = filled_arr
    cdef int[:, ::1] levels = levels_arr
    cdef unsigned char[:, ::1] frontier = frontier_arr
    cdef unsigned char[:, ::1] newmask = newmask_arr
    cdef double[:, ::1] newvals = newvals_arr
    cdef unsigned char[:, ::1] assigned = assigned_arr
    cdef Py_ssize_t remaining = 0, found, level = 0
    cdef double s1, s2, cnt

    for j in range(ny):
        for i in range(nx):
            if seed[j, i]:
                filled[j, i] = vals[j, i]
                levels[j, i] = 0
                assigned[j, i] = 1
                frontier[j, i] = 1
            if dom[j, i] and not seed[j, i]:
                remaining += 1

    while remaining > 0:
        found = 0
        level += 1
        for j in range(ny):
            js = _w(j, ny, py)
            jn = _e(j, ny, py)
            for i in range(nx):
                if not dom[j, i] or assigned[j, i]:
                    continue
                iw = _w(i, nx, px)
                ie = _e(i, nx, px)
                s1 = 0.0
                s2 = 0.0
                cnt = 0.0
                if iw >= 0 and frontier[j, iw]:
                    s1 += filled[j, iw]
                    cnt += 1.0
                if ie >= 0 and frontier[j, ie]:
                    s1 += filled[j, ie]
                    cnt += 1.0
                if js >= 0 and frontier[js, i]:
                    s2 += filled[js, i]
                    cnt += 1.0
                if jn >= 0 and frontier[jn, i]:
                    s2 += filled[jn, i]
                    cnt += 1.0
                if cnt > 0.0:
                    newmask[j, i] = 1
                    newvals[j, i] = (s1 + s2) / cnt
                    found += 1
        if found == 0:
            return filled_arr, False, levels_arr
        for j in range(ny):
            for i in range(nx):
                frontier[j, i] = 0
        for j in range(ny):
            for i in range(nx):
                if newmask[j, i]:
                    filled[j, i] = newvals[j, i]
                    levels[j, i] = <int>level
                    assigned[j, i] = 1
                    frontier[j, i] = 1
                    newmask[j, i] = 0
        remaining -= found
    return filled_arr, True, levels_arr
