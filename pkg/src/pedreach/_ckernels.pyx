# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled 2-D geometry kernels; same signatures as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, hypot, atan2, M_PI

cnp.import_array()


def canonical_generators_2d(G, double tol):
    cdef const double[:, ::1] Gv = np.ascontiguousarray(np.asarray(G, dtype=np.float64).reshape(2, -1))
    cdef Py_ssize_t n = Gv.shape[1], j, k = 0
    cdef double gx, gy, a
    if n == 0:
        return np.zeros((2, 0))
    cdef double[::1] xs = np.empty(n)
    cdef double[::1] ys = np.empty(n)
    cdef double[::1] ang = np.empty(n)
    for j in range(n):
        gx = Gv[0, j]
        gy = Gv[1, j]
        if hypot(gx, gy) <= tol:
            continue
        if gy < 0 or (gy == 0 and gx < 0):
            gx = -gx
            gy = -gy
        a = atan2(gy, gx)
        if a >= M_PI:
            a -= M_PI
            gx = -gx
            gy = -gy
        xs[k] = gx
        ys[k] = gy
        ang[k] = a
        k += 1
    if k == 0:
        return np.zeros((2, 0))
    order = np.argsort(np.asarray(ang[:k]), kind="stable")
    cdef Py_ssize_t[::1] ordv = order.astype(np.intp)
    out = np.empty((2, k))
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t m = 0, idx
    cdef double last = 0.0, mx, my, cross, s
    for j in range(k):
        idx = ordv[j]
        gx = xs[idx]
        gy = ys[idx]
        if m > 0:
            mx = ov[0, m - 1]
            my = ov[1, m - 1]
            cross = mx * gy - my * gx
            if fabs(cross) <= tol * max(hypot(mx, my), hypot(gx, gy)) and ang[idx] - last < 0.5:
                s = 1.0 if mx * gx + my * gy >= 0 else -1.0
                ov[0, m - 1] = mx + s * gx
                ov[1, m - 1] = my + s * gy
                continue
        ov[0, m] = gx
        ov[1, m] = gy
        last = ang[idx]
        m += 1
    if m > 1:
        cross = ov[0, 0] * ov[1, m - 1] - ov[1, 0] * ov[0, m - 1]
        if fabs(cross) <= tol * max(hypot(ov[0, 0], ov[1, 0]), hypot(ov[0, m - 1], ov[1, m - 1])):
            s = 1.0 if ov[0, 0] * ov[0, m - 1] + ov[1, 0] * ov[1, m - 1] >= 0 else -1.0
            ov[0, 0] += s * ov[0, m - 1]
            ov[1, 0] += s * ov[1, m - 1]
            m -= 1
    return out[:, :m].copy()


def zonotope_vertices_2d(c, G, double tol=1e-12):
    cdef const double[::1] cv = np.ascontiguousarray(np.asarray(c, dtype=np.float64).reshape(2))
    H = canonical_generators_2d(G, tol)
    cdef double[:, ::1] Hv = H
    cdef Py_ssize_t k = Hv.shape[1], j
    if k == 0:
        return np.asarray(cv).reshape(1, 2).copy()
    cdef double sx = cv[0], sy = cv[1]
    for j in range(k):
        sx -= Hv[0, j]
        sy -= Hv[1, j]
    if k == 1:
        return np.array([[sx, sy], [sx + 2 * Hv[0, 0], sy + 2 * Hv[1, 0]]])
    verts = np.empty((2 * k, 2))
    cdef double[:, ::1] vv = verts
    vv[0, 0] = sx
    vv[0, 1] = sy
    for j in range(k):
        sx += 2 * Hv[0, j]
        sy += 2 * Hv[1, j]
        vv[j + 1, 0] = sx
        vv[j + 1, 1] = sy
    for j in range(k - 1):
        sx -= 2 * Hv[0, j]
        sy -= 2 * Hv[1, j]
        vv[k + 1 + j, 0] = sx
        vv[k + 1 + j, 1] = sy
    return verts


def points_in_zonotope_2d(c, G, pts, double tol=1e-9):
    cdef const double[::1] cv = np.ascontiguousarray(np.asarray(c, dtype=np.float64).reshape(2))
    H = canonical_generators_2d(G, 1e-14)
    cdef double[:, ::1] Hv = H
    cdef Py_ssize_t k = Hv.shape[1], nd = 2 + 2 * k, i, j, p
    P = np.ascontiguousarray(np.atleast_2d(np.asarray(pts, dtype=np.float64)))
    cdef const double[:, ::1] Pv = P
    cdef Py_ssize_t npts = Pv.shape[0]
    D = np.empty((nd, 2))
    cdef double[:, ::1] Dv = D
    cdef double nrm
    Dv[0, 0] = 1.0
    Dv[0, 1] = 0.0
    Dv[1, 0] = 0.0
    Dv[1, 1] = 1.0
    for j in range(k):
        nrm = hypot(Hv[0, j], Hv[1, j])
        Dv[2 + 2 * j, 0] = Hv[0, j] / nrm
        Dv[2 + 2 * j, 1] = Hv[1, j] / nrm
        Dv[3 + 2 * j, 0] = -Hv[1, j] / nrm
        Dv[3 + 2 * j, 1] = Hv[0, j] / nrm
    cdef double[::1] sup = np.zeros(nd)
    for i in range(nd):
        for j in range(k):
            sup[i] += fabs(Dv[i, 0] * Hv[0, j] + Dv[i, 1] * Hv[1, j])
    out = np.ones(npts, dtype=np.uint8)
    cdef unsigned char[::1] ov = out
    cdef double dx, dy
    for p in range(npts):
        dx = Pv[p, 0] - cv[0]
        dy = Pv[p, 1] - cv[1]
        for i in range(nd):
            if fabs(Dv[i, 0] * dx + Dv[i, 1] * dy) > sup[i] + tol:
                ov[p] = 0
                break
    return out.astype(bool)


def points_in_convex_polygon(verts, pts, double tol=1e-9):
    V = np.ascontiguousarray(np.atleast_2d(np.asarray(verts, dtype=np.float64)))
    P = np.ascontiguousarray(np.atleast_2d(np.asarray(pts, dtype=np.float64)))
    cdef const double[:, ::1] Vv = V
    cdef const double[:, ::1] Pv = P
    cdef Py_ssize_t nv = Vv.shape[0], npts = Pv.shape[0], i, p
    out = np.ones(npts, dtype=np.uint8)
    cdef unsigned char[::1] ov = out
    cdef double ax, ay, ex, ey, el, L2, t, qx, qy, cross
    if nv == 1:
        for p in range(npts):
            if fabs(Pv[p, 0] - Vv[0, 0]) > tol or fabs(Pv[p, 1] - Vv[0, 1]) > tol:
                ov[p] = 0
        return out.astype(bool)
    if nv == 2:
        ax = Vv[0, 0]
        ay = Vv[0, 1]
        ex = Vv[1, 0] - ax
        ey = Vv[1, 1] - ay
        L2 = ex * ex + ey * ey
        for p in range(npts):
            t = ((Pv[p, 0] - ax) * ex + (Pv[p, 1] - ay) * ey) / L2
            t = min(1.0, max(0.0, t))
            qx = Pv[p, 0] - (ax + t * ex)
            qy = Pv[p, 1] - (ay + t * ey)
            if hypot(qx, qy) > tol:
                ov[p] = 0
        return out.astype(bool)
    # unit edge directions, computed once
    cdef double[::1] bx = np.empty(nv), by = np.empty(nv), ux = np.empty(nv), uy = np.empty(nv)
    cdef Py_ssize_t ne = 0
    for i in range(nv):
        ex = Vv[(i + 1) % nv, 0] - Vv[i, 0]
        ey = Vv[(i + 1) % nv, 1] - Vv[i, 1]
        el = hypot(ex, ey)
        if el == 0:
            continue
        bx[ne] = Vv[i, 0]
        by[ne] = Vv[i, 1]
        ux[ne] = ex / el
        uy[ne] = ey / el
        ne += 1
    for p in range(npts):
        qx = Pv[p, 0]
        qy = Pv[p, 1]
        for i in range(ne):
            cross = ux[i] * (qy - by[i]) - uy[i] * (qx - bx[i])
            if cross < -tol:
                ov[p] = 0
                break
    return out.astype(bool)
