"""Two-mode synthetic pedestrian corpus from an integrator model with noise."""

import numpy as np

from .zonoset import sample_points


def simulate(x0, inputs, A, B, Z_w, rng):
    """Roll ``x(k+1) = A x(k) + B u(k) + w(k)`` with ``w`` uniform in ``Z_w``.

    Returns the (T+1, n) states and the (T, n) noise samples.
    """
    inputs = np.asarray(inputs, dtype=float)
    W = sample_points(Z_w, len(inputs), rng) if len(inputs) else np.zeros((0, Z_w.dim))
    xs = [np.asarray(x0, dtype=float)]
    for u, w in zip(inputs, W):
        xs.append(A @ xs[-1] + B @ u + w)
    return np.array(xs), W


def _velocity_profile(direction, n, syn, rng):
    speed = rng.uniform(syn.speed - syn.speed_spread, syn.speed + syn.speed_spread)
    base = speed * np.asarray(direction, dtype=float)
    return base + rng.uniform(-syn.jitter, syn.jitter, size=(n, 2))


def generate_synthetic(cfg, seed):
    """Crossing pedestrians walk across the crossing region in either
    direction; walking-along pedestrians follow the sidewalk in either
    direction.

    Returns ``(positions, A, B, noise)`` where ``positions`` maps trajectory
    ids to (T+1, 2) arrays and ``noise`` lists ``(traj, t, w)`` triples.
    """
    rng = np.random.default_rng(seed)
    syn = cfg.synthetic
    reg = cfg.crossing_region
    A = np.eye(2)
    B = cfg.dt * np.eye(2)
    Z_w = cfg.noise().Z_w
    n_steps = syn.length - 1
    positions, noise = {}, []
    xmid = 0.5 * (reg["xmin"] + reg["xmax"])
    half = 0.4 * (reg["xmax"] - reg["xmin"])
    for i in range(syn.n_crossing):
        up = i % 2 == 0
        y0 = cfg.query_center[1] if up else -cfg.query_center[1]
        x0 = [rng.uniform(xmid - half, xmid + half), y0 + rng.uniform(-0.4, 0.4)]
        u = _velocity_profile([0.0, 1.0 if up else -1.0], n_steps, syn, rng)
        states, W = simulate(x0, u, A, B, Z_w, rng)
        tid = f"cross{i:03d}"
        positions[tid] = states
        noise.extend((tid, t, w) for t, w in enumerate(W))
    for i in range(syn.n_walking):
        east = i % 2 == 0
        x0 = [rng.uniform(-8.0, 8.0), syn.sidewalk_y + rng.uniform(-0.3, 0.3)]
        u = _velocity_profile([1.0 if east else -1.0, 0.0], n_steps, syn, rng)
        states, W = simulate(x0, u, A, B, Z_w, rng)
        tid = f"walk{i:03d}"
        positions[tid] = states
        noise.extend((tid, t, w) for t, w in enumerate(W))
    return positions, A, B, noise
