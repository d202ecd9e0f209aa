"""Data-driven reachability from noisy input-state trajectories.

The set of models ``[A B]`` consistent with the data is the matrix zonotope
``(X+ - M_w) pinv([X-; U-])``, where ``M_w`` bounds the stacked noise
matrix. Reachable sets are propagated with that model set, one step at a
time, and order-reduced after each step.
"""

from dataclasses import dataclass
import time

import numpy as np

from .zonoset import (
    DimensionError,
    MatrixZonotope,
    Zonotope,
    cartesian_product,
    count_product_generators,
    minkowski_sum,
    mz_linear_map_right,
    mz_shift,
    mz_times_zonotope,
    reduce_order,
)

#: Relative cut-off on singular values below which they count as zero.
EPS_RANK = 1e-10
#: Abort threshold on intermediate generator counts.
MAX_GENERATORS = 100_000
DEFAULT_MAX_ORDER = 20


class RankDeficientData(ValueError):
    """The stacked data matrix ``[X-; U-]`` lacks full row rank."""


class GeneratorExplosion(RuntimeError):
    pass


@dataclass(frozen=True)
class StateInputTrajectory:
    """States ``x(0..T)`` (rows) and inputs ``u(0..T-1)`` of one trajectory."""

    states: np.ndarray
    inputs: np.ndarray
    dt: float = 0.1

    def __post_init__(self):
        s = np.atleast_2d(np.asarray(self.states, dtype=float))
        u = np.asarray(self.inputs, dtype=float)
        u = u.reshape(len(u), -1) if u.size else np.zeros((0, s.shape[1]))
        if s.shape[0] != u.shape[0] + 1:
            raise ValueError(f"expected {u.shape[0] + 1} states for {u.shape[0]} inputs, got {s.shape[0]}")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(u))):
            raise ValueError("trajectory contains non-finite values")
        object.__setattr__(self, "states", s)
        object.__setattr__(self, "inputs", u)

    @property
    def length(self):
        return self.inputs.shape[0]


@dataclass(frozen=True)
class DataMatrices:
    X_plus: np.ndarray
    X_minus: np.ndarray
    U_minus: np.ndarray

    @property
    def T(self):
        return self.X_minus.shape[1]

    @property
    def stacked(self):
        return np.vstack([self.X_minus, self.U_minus])


@dataclass(frozen=True)
class NoiseSpec:
    Z_w: Zonotope


@dataclass(frozen=True)
class ModelSet:
    M_sigma: MatrixZonotope
    n_states: int

    @property
    def n_inputs(self):
        return self.M_sigma.shape[1] - self.n_states


def build_data_matrices(trajectories):
    """Column-stack shifted states and inputs of all trajectories, in order."""
    if not trajectories:
        raise ValueError("no trajectories given")
    n_x = trajectories[0].states.shape[1]
    n_u = trajectories[0].inputs.shape[1]
    xp, xm, um = [], [], []
    for i, tr in enumerate(trajectories):
        if tr.states.shape[0] < 2:
            raise ValueError(f"trajectory {i} has fewer than 2 states")
        if tr.states.shape[1] != n_x or tr.inputs.shape[1] != n_u:
            raise DimensionError(f"trajectory {i} has inconsistent state/input dimensions")
        xm.append(tr.states[:-1])
        xp.append(tr.states[1:])
        um.append(tr.inputs)
    return DataMatrices(
        X_plus=np.vstack(xp).T.copy(),
        X_minus=np.vstack(xm).T.copy(),
        U_minus=np.vstack(um).T.copy(),
    )


def build_noise_matrix_zonotope(spec, T):
    """Matrix zonotope holding every m x T matrix whose columns lie in ``Z_w``.

    One generator per (noise generator, column) pair.
    """
    if T < 1:
        raise ValueError("T must be at least 1")
    Zw = spec.Z_w
    m, g = Zw.dim, Zw.n_generators
    C = np.tile(Zw.center[:, None], (1, T))
    gens = np.zeros((g * T, m, T))
    for i in range(g):
        for j in range(T):
            gens[i * T + j, :, j] = Zw.generators[:, i]
    return MatrixZonotope(C, gens)


def pinv_full_row_rank(H, eps=EPS_RANK):
    """Moore-Penrose inverse of ``H`` via SVD; raises unless H has full row rank."""
    U, s, Vt = np.linalg.svd(H, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        raise RankDeficientData("data matrix is zero")
    rank = int(np.sum(s > eps * s[0]))
    if rank < H.shape[0]:
        raise RankDeficientData(
            f"[X-; U-] has rank {rank} < {H.shape[0]}; the data are not rich enough "
            f"(T = {H.shape[1]} columns)"
        )
    return (Vt.T / s) @ U.T


def compute_model_set(D, spec):
    H = D.stacked
    if spec.Z_w.dim != D.X_plus.shape[0]:
        raise DimensionError("noise dimension does not match state dimension")
    if H.shape[1] < H.shape[0]:
        raise RankDeficientData(f"only {H.shape[1]} data columns for {H.shape[0]} unknowns per row")
    H_pinv = pinv_full_row_rank(H)
    M_w = build_noise_matrix_zonotope(spec, D.T)
    return ModelSet(mz_linear_map_right(mz_shift(D.X_plus, M_w, -1), H_pinv), n_states=D.X_plus.shape[0])


def reach_step(M, R_k, U_k, spec):
    """One step ``M_sigma (R_k x U_k) + Z_w``."""
    n_x, n_u = M.M_sigma.shape[0], M.M_sigma.shape[1] - M.n_states
    if R_k.dim != M.n_states or U_k.dim != n_u or spec.Z_w.dim != n_x:
        raise DimensionError(
            f"reach_step got state dim {R_k.dim}, input dim {U_k.dim}, noise dim {spec.Z_w.dim} "
            f"for a {M.M_sigma.shape} model set"
        )
    RU = cartesian_product(R_k, U_k)
    n = count_product_generators(M.M_sigma, RU) + spec.Z_w.n_generators
    if n > MAX_GENERATORS:
        raise GeneratorExplosion(
            f"propagation would create {n} generators (limit {MAX_GENERATORS}); "
            "use fewer data columns, a smaller max_order or fewer noise generators"
        )
    return minkowski_sum(mz_times_zonotope(M.M_sigma, RU), spec.Z_w)


def reach_horizon(M, R_0, inputs, spec, max_order=DEFAULT_MAX_ORDER, timings=None):
    """Reachable sets ``R_1 .. R_N`` for the per-step input sets ``inputs``.

    If ``timings`` is a list, the wall time of each step is appended to it.
    """
    if len(inputs) < 1:
        raise ValueError("horizon must be at least one step")
    out = []
    R = R_0
    for U in inputs:
        t0 = time.perf_counter()
        R = reduce_order(reach_step(M, R, U, spec), max_order)
        if timings is not None:
            timings.append(time.perf_counter() - t0)
        out.append(R)
    return out
