"""Zonotope and matrix-zonotope algebra.

A zonotope ``<c, G>`` is the set ``{c + G @ b : |b|_inf <= 1}``; a matrix
zonotope is the same construction over matrices. All objects are immutable
and every operation returns a new object.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import linprog

from . import kernels

#: Tolerance on the equality residual and on the |beta| <= 1 slack.
EPS_FEAS = 1e-9


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def _frozen(a):
    a = np.array(a, dtype=float, order="C")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Zonotope:
    """Center vector of length m and an m x gamma generator matrix."""

    center: np.ndarray
    generators: np.ndarray

    def __init__(self, center, generators=None):
        c = np.asarray(center, dtype=float).reshape(-1)
        if generators is None:
            G = np.zeros((c.size, 0))
        else:
            G = np.asarray(generators, dtype=float)
            if G.ndim == 1:
                G = G.reshape(c.size, -1) if G.size else np.zeros((c.size, 0))
        if G.ndim != 2 or G.shape[0] != c.size:
            raise DimensionError(f"generator matrix {G.shape} does not match center of length {c.size}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(G))):
            raise ValueError("zonotope entries must be finite")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "generators", _frozen(G))

    @property
    def dim(self):
        return self.center.size

    @property
    def n_generators(self):
        return self.generators.shape[1]

    @property
    def order(self):
        return self.n_generators / self.dim

    def __repr__(self):
        return f"Zonotope(dim={self.dim}, n_generators={self.n_generators})"

    def __add__(self, other):
        return minkowski_sum(self, other)

    def __rmatmul__(self, L):
        return linear_map(L, self)

    def to_text(self):
        """Debug rendering used by the golden-file tests."""
        lines = ["center " + " ".join(f"{v:.17g}" for v in self.center)]
        for j in range(self.n_generators):
            lines.append(f"g{j} " + " ".join(f"{v:.17g}" for v in self.generators[:, j]))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class MatrixZonotope:
    """Center matrix (m x p) and a stack of generator matrices (gamma x m x p)."""

    center: np.ndarray
    generators: np.ndarray

    def __init__(self, center, generators=()):
        C = np.asarray(center, dtype=float)
        if C.ndim != 2:
            raise DimensionError("matrix zonotope center must be 2-D")
        if isinstance(generators, np.ndarray) and generators.ndim == 3:
            Gs = generators.astype(float)
        else:
            gl = [np.asarray(g, dtype=float) for g in generators]
            Gs = np.stack(gl) if gl else np.zeros((0,) + C.shape)
        if Gs.shape[1:] != C.shape:
            raise DimensionError(f"generators of shape {Gs.shape[1:]} do not match center {C.shape}")
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(Gs))):
            raise ValueError("matrix zonotope entries must be finite")
        object.__setattr__(self, "center", _frozen(C))
        object.__setattr__(self, "generators", _frozen(Gs))

    @property
    def shape(self):
        return self.center.shape

    @property
    def n_generators(self):
        return self.generators.shape[0]

    def __repr__(self):
        return f"MatrixZonotope(shape={self.shape}, n_generators={self.n_generators})"


@dataclass(frozen=True)
class IntervalBox:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")

    def contains(self, x, tol=0.0):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))


@dataclass(frozen=True, eq=False)
class Polygon2D:
    """Convex polygon, vertices counter-clockwise as rows of a (v, 2) array."""

    vertices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen(np.asarray(self.vertices).reshape(-1, 2)))

    def __len__(self):
        return self.vertices.shape[0]

    def is_convex(self, tol=1e-9):
        v = self.vertices
        if len(v) < 3:
            return True
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        return bool(np.all(cross >= -tol))

    def contains_points(self, pts, tol=EPS_FEAS):
        return kernels.points_in_convex_polygon(self.vertices, pts, tol)


# ---------------------------------------------------------------- exact ops


def linear_map(L, Z):
    """Image ``<L c, L G>`` of ``Z`` under the matrix ``L``."""
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if L.shape[1] != Z.dim:
        raise DimensionError(f"cannot map a {Z.dim}-D zonotope with a {L.shape} matrix")
    return Zonotope(L @ Z.center, L @ Z.generators)


def minkowski_sum(Z1, Z2):
    if Z1.dim != Z2.dim:
        raise DimensionError(f"Minkowski sum of {Z1.dim}-D and {Z2.dim}-D zonotopes")
    return Zonotope(Z1.center + Z2.center, np.hstack([Z1.generators, Z2.generators]))


def cartesian_product(Z1, Z2):
    m1, m2 = Z1.dim, Z2.dim
    g1, g2 = Z1.n_generators, Z2.n_generators
    G = np.zeros((m1 + m2, g1 + g2))
    G[:m1, :g1] = Z1.generators
    G[m1:, g1:] = Z2.generators
    return Zonotope(np.concatenate([Z1.center, Z2.center]), G)


def mz_linear_map_right(M, P):
    """Right-multiply every element of ``M`` by the constant matrix ``P``."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if P.shape[0] != M.shape[1]:
        raise DimensionError(f"cannot right-multiply a {M.shape} matrix zonotope by {P.shape}")
    return MatrixZonotope(M.center @ P, M.generators @ P)


def mz_shift(C_new, M, sign=1):
    """``C_new + sign * M``; with sign = -1 this is a negation, not a set difference."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    C_new = np.asarray(C_new, dtype=float)
    if C_new.shape != M.shape:
        raise DimensionError(f"shift of shape {C_new.shape} does not match {M.shape}")
    return MatrixZonotope(C_new + sign * M.center, sign * M.generators)


def mz_times_zonotope(M, Z):
    """Over-approximation of ``{X z : X in M, z in Z}``.

    The bilinear terms ``beta_M * beta_Z`` are treated as independent
    factors, so the result is sound but generally not tight.
    """
    if M.shape[1] != Z.dim:
        raise DimensionError(f"cannot multiply a {M.shape} matrix zonotope with a {Z.dim}-D zonotope")
    m = M.shape[0]
    parts = [M.center @ Z.generators]
    if M.n_generators:
        Gc = M.generators @ Z.center  # (gM, m)
        GG = M.generators @ Z.generators  # (gM, m, gZ)
        cross = np.concatenate([Gc[:, :, None], GG], axis=2)  # (gM, m, 1 + gZ)
        parts.append(cross.transpose(1, 0, 2).reshape(m, -1))
    return Zonotope(M.center @ Z.center, np.hstack(parts))


def count_product_generators(M, Z):
    """Number of generators :func:`mz_times_zonotope` would produce."""
    return Z.n_generators + M.n_generators * (1 + Z.n_generators)


# ------------------------------------------------------------- containment


def _linf_feasible(G, d, eps=EPS_FEAS):
    """Is there b with G b = d and |b|_inf <= 1 (up to ``eps``)?"""
    nrow, ng = G.shape
    if ng == 0:
        return bool(np.max(np.abs(d), initial=0.0) <= eps)
    # min t  s.t.  G b = d,  -t <= b_i <= t
    cost = np.zeros(ng + 1)
    cost[-1] = 1.0
    eye = np.eye(ng)
    A_ub = np.block([[eye, -np.ones((ng, 1))], [-eye, -np.ones((ng, 1))]])
    b_ub = np.zeros(2 * ng)
    A_eq = np.hstack([G, np.zeros((nrow, 1))])
    bounds = [(None, None)] * ng + [(0, None)]
    res = linprog(
        cost,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=d,
        bounds=bounds,
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status == 2:
        return False
    if res.status != 0:
        raise RuntimeError(f"containment LP failed: {res.message}")
    beta = res.x[:ng]
    r = d - G @ beta
    # one least-squares polish step on the equality residual
    beta = beta + np.linalg.lstsq(G, r, rcond=None)[0]
    r = d - G @ beta
    return bool(np.max(np.abs(r)) <= eps and np.max(np.abs(beta)) <= 1.0 + eps)


def contains_point(Z, x):
    """Exact membership test of ``x`` in ``Z`` via a linear program."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != Z.dim:
        raise DimensionError(f"point of dimension {x.size} tested against {Z.dim}-D zonotope")
    return _linf_feasible(Z.generators, x - Z.center)


def mz_contains_matrix(M, X):
    X = np.asarray(X, dtype=float)
    if X.shape != M.shape:
        raise DimensionError(f"matrix of shape {X.shape} tested against {M.shape} matrix zonotope")
    G = M.generators.reshape(M.n_generators, M.center.size).T
    return _linf_feasible(G, (X - M.center).ravel())


def contains_points(Z, pts, tol=EPS_FEAS):
    """Batched membership for 2-D zonotopes via the compiled kernel.

    Returns a boolean array. Exact for any 2-D zonotope; use
    :func:`contains_point` for other dimensions.
    """
    if Z.dim != 2:
        raise DimensionError("batched containment is implemented for 2-D zonotopes only")
    return kernels.points_in_zonotope_2d(Z.center, Z.generators, pts, tol)


# --------------------------------------------------------- geometry / misc


def normalize(Z, tol=0.0):
    """Drop generators whose Euclidean length is <= tol."""
    keep = np.linalg.norm(Z.generators, axis=0) > tol
    return Zonotope(Z.center, Z.generators[:, keep])


def to_polygon(Z):
    if Z.dim != 2:
        raise DimensionError(f"to_polygon needs a 2-D zonotope, got {Z.dim}-D")
    Z = normalize(Z)
    return Polygon2D(kernels.zonotope_vertices_2d(Z.center, Z.generators))


def interval_hull(Z):
    r = np.abs(Z.generators).sum(axis=1)
    return IntervalBox(Z.center - r, Z.center + r)


def reduce_order(Z, max_order):
    """Girard reduction to at most ``max_order * dim`` generators.

    Generators are ranked by ``|g|_1 - |g|_inf``; the smallest ones are
    replaced by the axis-aligned box that encloses them.
    """
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    m = Z.dim
    budget = int(math.floor(max_order * m))
    if Z.n_generators <= budget:
        return Z
    G = Z.generators
    score = np.abs(G).sum(axis=0) - np.abs(G).max(axis=0)
    order = np.argsort(-score, kind="stable")
    n_keep = budget - m
    kept = G[:, order[:n_keep]]
    # original column order, so the order-1 box reproduces the interval hull bit for bit
    boxed = np.diag(np.ascontiguousarray(np.abs(G[:, np.sort(order[n_keep:])])).sum(axis=1))
    return Zonotope(Z.center, np.hstack([kept, boxed]))


def polygon_area(P):
    v = P.vertices
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0)


def sample_points(Z, n, rng):
    """Draw ``n`` members of ``Z`` with factors uniform on [-1, 1]."""
    beta = rng.uniform(-1.0, 1.0, size=(n, Z.n_generators))
    return Z.center + beta @ Z.generators.T


def sample_matrices(M, n, rng):
    beta = rng.uniform(-1.0, 1.0, size=(n, M.n_generators))
    return M.center + np.tensordot(beta, M.generators, axes=1)
