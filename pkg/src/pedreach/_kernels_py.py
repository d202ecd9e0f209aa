"""Pure numpy implementations of the 2-D geometry kernels.

These mirror ``_ckernels.pyx`` function for function and are used when the
compiled extension is unavailable (or when ``PEDREACH_PURE_PYTHON=1``).
"""

import numpy as np


def canonical_generators_2d(G, tol):
    """Drop near-zero generators, flip to the upper half-plane, sort by angle
    and merge parallel ones by summation.

    Returns a (2, k) array sorted by angle in [0, pi).
    """
    G = np.asarray(G, dtype=float).reshape(2, -1)
    if G.shape[1] == 0:
        return np.zeros((2, 0))
    norms = np.hypot(G[0], G[1])
    G = G[:, norms > tol]
    if G.shape[1] == 0:
        return np.zeros((2, 0))
    flip = (G[1] < 0) | ((G[1] == 0) & (G[0] < 0))
    G = np.where(flip, -G, G)
    ang = np.arctan2(G[1], G[0])
    # arctan2 of (-x, +tiny) rounds to pi; negate those so the range is [0, pi)
    seam = ang >= np.pi
    G = np.where(seam, -G, G)
    ang = np.where(seam, ang - np.pi, ang)
    order = np.argsort(ang, kind="stable")
    G = G[:, order]
    ang = ang[order]
    merged = [G[:, 0].copy()]
    last = ang[0]
    for j in range(1, G.shape[1]):
        g = G[:, j]
        m = merged[-1]
        cross = m[0] * g[1] - m[1] * g[0]
        if abs(cross) <= tol * max(np.hypot(*m), np.hypot(*g)) and ang[j] - last < 0.5:
            merged[-1] = m + g if m @ g >= 0 else m - g
        else:
            merged.append(g.copy())
            last = ang[j]
    # first and last may be parallel across the 0/pi seam
    if len(merged) > 1:
        a, b = merged[0], merged[-1]
        cross = a[0] * b[1] - a[1] * b[0]
        if abs(cross) <= tol * max(np.hypot(*a), np.hypot(*b)):
            s = 1.0 if a @ b >= 0 else -1.0
            merged[0] = a + s * b
            merged.pop()
    return np.column_stack(merged)


def zonotope_vertices_2d(c, G, tol=1e-12):
    """Counter-clockwise vertices of a 2-D zonotope, shape (v, 2)."""
    c = np.asarray(c, dtype=float).reshape(2)
    H = canonical_generators_2d(G, tol)
    k = H.shape[1]
    if k == 0:
        return c.reshape(1, 2).copy()
    # lowest point: all generators point up, so take -sum
    start = c - H.sum(axis=1)
    if k == 1:
        return np.vstack([start, start + 2 * H[:, 0]])
    steps = 2 * H.T
    half = start + np.cumsum(steps, axis=0)
    other = half[-1] - np.cumsum(steps, axis=0)
    verts = np.vstack([start, half[:-1], half[-1:], other[:-1]])
    return verts


def points_in_zonotope_2d(c, G, pts, tol=1e-9):
    """Vectorized membership test of many points in one 2-D zonotope.

    Every generator direction, its normal and both coordinate axes serve as
    test directions; the support-function check along the generator normals
    is exact for full-dimensional zonotopes and the extra directions make
    it exact for segments and points.
    """
    c = np.asarray(c, dtype=float).reshape(2)
    G = np.asarray(G, dtype=float).reshape(2, -1)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    H = canonical_generators_2d(G, 1e-14)
    dirs = [np.eye(2)]
    if H.shape[1]:
        n = np.hypot(H[0], H[1])
        u = H / n
        dirs.append(u.T)
        dirs.append(np.column_stack([-u[1], u[0]]))
    D = np.vstack(dirs)
    support = np.abs(D @ H).sum(axis=1) if H.shape[1] else np.zeros(D.shape[0])
    proj = np.abs((pts - c) @ D.T)
    return np.all(proj <= support + tol, axis=1)


def points_in_convex_polygon(verts, pts, tol=1e-9):
    """Membership of points in a CCW convex polygon (degenerate ones allowed)."""
    verts = np.atleast_2d(np.asarray(verts, dtype=float))
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    v = verts.shape[0]
    if v == 1:
        return np.all(np.abs(pts - verts[0]) <= tol, axis=1)
    if v == 2:
        a, b = verts
        d = b - a
        L2 = d @ d
        t = np.clip(((pts - a) @ d) / L2, 0.0, 1.0)
        closest = a + t[:, None] * d
        return np.hypot(*(pts - closest).T) <= tol
    inside = np.ones(pts.shape[0], dtype=bool)
    for i in range(v):
        a = verts[i]
        b = verts[(i + 1) % v]
        e = b - a
        el = np.hypot(*e)
        if el == 0:
            continue
        cross = (e[0] * (pts[:, 1] - a[1]) - e[1] * (pts[:, 0] - a[0])) / el
        inside &= cross >= -tol
    return inside
