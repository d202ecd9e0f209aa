import math
from pathlib import Path

import numpy as np
import pytest

from pedreach.reach import NoiseSpec, StateInputTrajectory
from pedreach.zonoset import Zonotope

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_zonotope(rng, dim=2, n_gen=None, scale=1.0):
    if n_gen is None:
        n_gen = int(rng.integers(1, 8))
    return Zonotope(rng.normal(size=dim) * scale, rng.normal(size=(dim, n_gen)) * scale)


def halfspace_oracle(Z, pts, tol=1e-9):
    """Brute-force 2-D membership: check the support function along the
    normal of every raw generator and both coordinate axes. No sorting or
    merging, so it shares no code path with the library kernels."""
    c, G = Z.center, Z.generators
    pts = np.atleast_2d(pts)
    dirs = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    for g in G.T:
        n = math.hypot(g[0], g[1])
        if n > 1e-14:
            dirs.append(np.array([-g[1], g[0]]) / n)
            dirs.append(g / n)
    D = np.array(dirs)
    support = np.abs(D @ G).sum(axis=1)
    return np.all(np.abs((pts - c) @ D.T) <= support + tol, axis=1)


def random_system(rng, rho_max=1.1):
    """Random 2-state, 2-input system with spectral radius <= rho_max."""
    A = rng.normal(size=(2, 2))
    A *= rng.uniform(0.3, rho_max) / max(abs(np.linalg.eigvals(A)))
    B = rng.normal(size=(2, 2)) * 0.5
    return A, B


def simulate_dataset(rng, A, B, noise_half=0.005, n_traj=10, length=10, u_scale=1.0):
    """Trajectories of x+ = Ax + Bu + w, w uniform in the box of half-width noise_half."""
    trajs = []
    for _ in range(n_traj):
        x = rng.normal(size=2)
        us = rng.uniform(-u_scale, u_scale, size=(length, 2))
        xs = [x]
        for u in us:
            x = A @ x + B @ u + rng.uniform(-noise_half, noise_half, size=2)
            xs.append(x)
        trajs.append(StateInputTrajectory(np.array(xs), us))
    return trajs


def box_noise(half, dim=2):
    return NoiseSpec(Zonotope(np.zeros(dim), half * np.eye(dim)))
