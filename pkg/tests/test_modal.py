import cmath
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from pedreach.modal import (
    CROSSING,
    DEFAULT_MODES,
    OTHER,
    WALKING_ALONG,
    CrossingGeometry,
    EmptySelection,
    ModeLabel,
    PedestrianQuery,
    TrajectoryChunk,
    chunk_headings,
    chunk_trajectories,
    compare_modal_vs_pooled,
    default_crossing_oracle,
    estimate_input_zonotope,
    modal_reach,
    pooled_reach,
    select_chunks,
    wrap_angle,
)
from pedreach.reach import NoiseSpec, StateInputTrajectory, reach_step, compute_model_set, build_data_matrices
from pedreach.zonoset import Zonotope, contains_point, contains_points, sample_points
from conftest import box_noise, halfspace_oracle

GEOM = CrossingGeometry(-2, 2, -6, 6)
NO_NOISE = NoiseSpec(Zonotope([0, 0]))


def make_chunk(points, label=CROSSING, inputs=None, dt=1.0):
    points = np.asarray(points, dtype=float)
    if inputs is None:
        inputs = np.diff(points, axis=0) / dt
    return TrajectoryChunk(points, np.asarray(inputs, float), chunk_headings(points), label)


def line_chunk(start, heading, n=5, step=1.0, label=CROSSING):
    d = step * np.array([math.cos(heading), math.sin(heading)])
    return make_chunk(np.asarray(start, float) + np.outer(np.arange(n), d), label)


def integrator_data(rng, n_traj, length, velocity, start_box, noise_half=0.0, dt=0.1, jitter=0.3):
    """Noisy integrator trajectories x+ = x + dt*u + w."""
    out = []
    for _ in range(n_traj):
        x = rng.uniform(*start_box)
        us = np.asarray(velocity) + rng.uniform(-jitter, jitter, size=(length, 2))
        xs = [x]
        for u in us:
            x = x + dt * u + rng.uniform(-noise_half, noise_half, size=2)
            xs.append(x)
        out.append(StateInputTrajectory(np.array(xs), us, dt))
    return out


# ------------------------------------------------------------------ chunking


def test_chunk_counts_and_remainder():
    lab = lambda c: OTHER
    ten = StateInputTrajectory(np.arange(20.0).reshape(10, 2), np.ones((9, 2)))
    nine = StateInputTrajectory(np.arange(18.0).reshape(9, 2), np.ones((8, 2)))
    chunks = chunk_trajectories([ten], 5, lab)
    assert len(chunks) == 2
    assert np.array_equal(chunks[1].points, ten.states[5:10])
    (only,) = chunk_trajectories([nine], 5, lab)
    assert np.array_equal(only.points, nine.states[:5])
    for c in chunks:
        assert c.points.shape == (5, 2) and c.inputs.shape == (4, 2) and c.headings.shape == (5,)


def test_chunk_size_must_be_at_least_two():
    with pytest.raises(ValueError):
        chunk_trajectories([], 1, lambda c: OTHER)


def test_east_headings_are_zero():
    tr = StateInputTrajectory(np.column_stack([np.arange(6.0), np.zeros(6)]), np.ones((5, 2)))
    (c,) = chunk_trajectories([tr], 6, lambda c: OTHER)
    assert np.array_equal(c.headings, np.zeros(6))


def test_last_heading_copies_penultimate():
    c = make_chunk([[0, 0], [1, 0], [1, 1]])
    assert c.headings.tolist() == [0.0, math.pi / 2, math.pi / 2]


def test_chunks_are_labeled_in_order():
    tr = StateInputTrajectory(np.arange(24.0).reshape(12, 2), np.ones((11, 2)))
    seen = []
    chunks = chunk_trajectories([tr, tr], 4, lambda c: seen.append(c.source) or OTHER)
    assert [c.source for c in chunks] == [(0, 0), (0, 4), (0, 8), (1, 0), (1, 4), (1, 8)]
    assert seen == [c.source for c in chunks]


# -------------------------------------------------------------------- oracle


def test_oracle_cases():
    assert default_crossing_oracle(line_chunk([0, 0], math.pi / 2), GEOM) == CROSSING
    assert default_crossing_oracle(line_chunk([0, 0], -math.pi / 2), GEOM) == CROSSING
    # heading 0 relative to the crossing axis
    along_x = CrossingGeometry(-2, 2, -6, 6, axis=0.0)
    assert default_crossing_oracle(line_chunk([0, 0], 0.0), along_x) == CROSSING
    assert default_crossing_oracle(line_chunk([10, 0], math.pi / 2), GEOM) == OTHER
    assert default_crossing_oracle(line_chunk([10, 0], 0.0), GEOM) == WALKING_ALONG
    assert default_crossing_oracle(line_chunk([0, 0], math.pi), GEOM) == WALKING_ALONG


def test_oracle_tie_goes_to_crossing():
    c = make_chunk([[0, 0], [1, 1], [2, 2]])
    assert c.headings[0] == math.pi / 4
    assert default_crossing_oracle(c, GEOM) == CROSSING
    assert default_crossing_oracle(make_chunk([[0, 0], [-1, 1]]), GEOM) == CROSSING


# ----------------------------------------------------------------- selection


def query(center=(0, 0), half=1.0, alpha=0.0, kappa=math.pi / 6, N=2):
    return PedestrianQuery(Zonotope(center, half * np.eye(2)), alpha, kappa, N)


def test_selection_isolates_heading():
    q = query()
    assert select_chunks([line_chunk([0, 0], math.pi)], CROSSING, q) == []
    c = line_chunk([0, 0], 0.0)
    assert select_chunks([c], CROSSING, q) == [c]


def test_selection_half_open_interval():
    q = query(kappa=0.5)
    assert select_chunks([line_chunk([0, 0], 0.5)], CROSSING, q)
    assert not select_chunks([line_chunk([0, 0], -0.5)], CROSSING, q)


def test_zero_kappa_keeps_only_exact_heading():
    q = query(kappa=0.0)
    assert select_chunks([line_chunk([0, 0], 0.0)], CROSSING, q)
    assert not select_chunks([line_chunk([0, 0], 1e-6)], CROSSING, q)


def four_chunk_fixture():
    X_p = Zonotope([0, -5], np.diag([1.0, 0.5]))
    q = PedestrianQuery(X_p, math.pi / 2, math.pi / 6, 3)
    chunks = [
        line_chunk([2.5, -5.0], math.pi / 2, step=0.13),  # starts outside X_p
        line_chunk([0.3, -5.2], 0.0, step=0.13),  # heads the wrong way
        line_chunk([-0.2, -4.8], math.pi / 2 + 0.1, step=0.13),  # fulfils everything
        line_chunk([0.1, -5.1], math.pi / 2, step=0.13, label=WALKING_ALONG),  # other mode
    ]
    return chunks, q


def test_four_chunk_fixture_keeps_one():
    chunks, q = four_chunk_fixture()
    kept = select_chunks(chunks, CROSSING, q)
    assert kept == [chunks[2]]


def independent_keep(chunk, mode, q):
    if chunk.label is None or chunk.label.id != mode.id:
        return False
    if not halfspace_oracle(q.X_p, chunk.points[:1])[0]:
        return False
    phi = cmath.phase(cmath.exp(1j * (chunk.headings[0] - q.alpha_p)))
    if phi == -math.pi:
        phi = math.pi
    return phi == 0.0 or -q.kappa < phi <= q.kappa


def random_fixture(rng):
    X_p = Zonotope(rng.normal(size=2), rng.normal(size=(2, int(rng.integers(1, 4)))))
    q = PedestrianQuery(X_p, rng.uniform(-4, 4), rng.uniform(0, math.pi), 2)
    chunks = []
    for _ in range(int(rng.integers(1, 12))):
        start = X_p.center + rng.normal(size=2) * 2
        label = DEFAULT_MODES[int(rng.integers(0, 3))]
        chunks.append(line_chunk(start, rng.uniform(-math.pi, math.pi), n=3, label=label))
    return chunks, q


def test_selection_matches_independent_predicates(rng):
    for _ in range(300):
        chunks, q = random_fixture(rng)
        for mode in DEFAULT_MODES:
            kept = select_chunks(chunks, mode, q)
            expected = [c for c in chunks if independent_keep(c, mode, q)]
            assert [id(c) for c in kept] == [id(c) for c in expected]


@settings(max_examples=200, deadline=None)
@given(
    h=st.floats(-math.pi, math.pi),
    alpha=st.floats(-10, 10),
    kappa=st.floats(0, math.pi),
    turns=st.integers(-3, 3),
)
def test_heading_wraparound_invariance(h, alpha, kappa, turns):
    d = wrap_angle(h - alpha)
    # adding 2*pi in floating point moves the value by a few ulps
    assume(abs(abs(d) - kappa) > 1e-9 and abs(abs(d) - math.pi) > 1e-9)
    c = line_chunk([0, 0], h)
    shifted = TrajectoryChunk(c.points, c.inputs, c.headings + 2 * math.pi * turns, c.label)
    base = bool(select_chunks([c], CROSSING, query(alpha=alpha, kappa=kappa)))
    assert bool(select_chunks([shifted], CROSSING, query(alpha=alpha, kappa=kappa))) == base
    assert bool(select_chunks([c], CROSSING, query(alpha=alpha + 2 * math.pi * turns, kappa=kappa))) == base


def test_wrap_angle_range():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(0.0) == 0.0
    assert abs(wrap_angle(3 * math.pi / 2) + math.pi / 2) < 1e-15


def test_query_validation():
    with pytest.raises(ValueError):
        query(kappa=-0.1)
    with pytest.raises(ValueError):
        query(kappa=4.0)
    with pytest.raises(ValueError):
        query(N=0)


# -------------------------------------------------------------- input sets


def test_input_zonotope_formula():
    c1 = make_chunk([[0, 0], [1, 0], [2, 0]], inputs=[[1, 0], [5, 5]])
    c2 = make_chunk([[0, 0], [1, 0], [2, 0]], inputs=[[3, 0], [5, 5]])
    U = estimate_input_zonotope([c1, c2], 0)
    assert U.center.tolist() == [2, 0]
    assert np.array_equal(U.generators, np.diag([1.0, 0.0]))
    S = estimate_input_zonotope([c1], 1)
    assert S.center.tolist() == [5, 5] and not S.generators.any()


def test_input_zonotope_errors():
    c = make_chunk([[0, 0], [1, 0], [2, 0]])
    with pytest.raises(EmptySelection):
        estimate_input_zonotope([], 0)
    with pytest.raises(IndexError):
        estimate_input_zonotope([c], 2)


def test_input_zonotope_contains_observations(rng):
    for _ in range(200):
        kept = [make_chunk(rng.normal(size=(6, 2)), inputs=rng.normal(size=(5, 2)) * 3) for _ in range(rng.integers(1, 9))]
        for k in range(5):
            U = estimate_input_zonotope(kept, k)
            for c in kept:
                assert contains_point(U, c.inputs[k])


# ------------------------------------------------------------- modal reach


def test_noise_free_singleton_traces_chunk(rng):
    A, B = np.array([[0.9, 0.2], [-0.1, 0.95]]), np.array([[0.5, 0.1], [0.0, 0.4]])
    us = rng.normal(size=(7, 2))
    xs = [np.array([0.0, 0.0])]
    for u in us:
        xs.append(A @ xs[-1] + B @ u)
    c = make_chunk(np.array(xs), inputs=us)
    q = PedestrianQuery(Zonotope(xs[0]), float(c.headings[0]), 0.0, 7)
    (out,) = modal_reach([c], [CROSSING], q, NO_NOISE).modes
    assert out.ok and out.kept_chunks == 1
    assert len(out.sets) == 8 and out.sets[0] is q.X_p
    for R, x in zip(out.sets[1:], xs[1:]):
        assert np.max(np.abs(R.center - x)) <= 1e-9
        assert R.n_generators == 0 or np.max(np.abs(R.generators)) <= 1e-9


def two_population_chunks(rng):
    east = integrator_data(rng, 6, 5, [1.3, 0], ([-0.5, -0.5], [0.5, 0.5]))
    west = integrator_data(rng, 4, 5, [-1.3, 0], ([-0.5, -0.5], [0.5, 0.5]))
    label = lambda c: CROSSING if abs(c.headings[0]) < math.pi / 2 else WALKING_ALONG
    return chunk_trajectories(east + west, 6, label)


def test_two_populations_use_own_data(rng):
    chunks = two_population_chunks(rng)
    spec = box_noise(1e-3)
    east_q = PedestrianQuery(Zonotope([0, 0], np.eye(2)), 0.0, math.pi / 3, 5)
    res = modal_reach(chunks, [WALKING_ALONG, CROSSING], east_q, spec)
    assert [m.label for m in res.modes] == [CROSSING, WALKING_ALONG]
    assert res["crossing"].kept_chunks == 6 and res["crossing"].ok
    assert res["walking-along"].status == "empty_selection"
    west_q = PedestrianQuery(east_q.X_p, math.pi, math.pi / 3, 5)
    res = modal_reach(chunks, [CROSSING, WALKING_ALONG], west_q, spec)
    assert res[2].kept_chunks == 4 and res[2].ok
    assert res[1].status == "empty_selection"
    # inputs come from the matching population only
    assert res[2].inputs[0].center[0] < 0


def test_rank_deficient_mode_is_reported(rng):
    # one chunk of 4 points gives 3 data columns for 4 unknown rows
    east = integrator_data(rng, 1, 3, [1.3, 0], ([-0.5, -0.5], [0.5, 0.5]))
    chunks = chunk_trajectories(east, 4, lambda c: CROSSING)
    q = PedestrianQuery(Zonotope([0, 0], np.eye(2)), 0.0, math.pi / 3, 3)
    (out,) = modal_reach(chunks, [CROSSING], q, box_noise(1e-3)).modes
    assert out.status == "rank_deficient" and out.kept_chunks == 1 and not out.sets


def test_single_step_equals_reach_step(rng):
    chunks = two_population_chunks(rng)
    spec = box_noise(1e-3)
    q = PedestrianQuery(Zonotope([0, 0], np.eye(2)), 0.0, math.pi / 3, 1)
    out = modal_reach(chunks, [CROSSING], q, spec, max_order=1000)[1]
    kept = select_chunks(chunks, CROSSING, q)
    M = compute_model_set(build_data_matrices([c.as_trajectory() for c in kept]), spec)
    R = reach_step(M, q.X_p, estimate_input_zonotope(kept, 0), spec)
    assert len(out.sets) == 2
    assert np.array_equal(out.sets[1].center, R.center)
    assert np.array_equal(out.sets[1].generators, R.generators)


def test_horizon_longer_than_chunk(rng):
    chunks = two_population_chunks(rng)
    q = PedestrianQuery(Zonotope([0, 0], np.eye(2)), 0.0, math.pi / 3, 6)
    with pytest.raises(ValueError):
        modal_reach(chunks, [CROSSING], q, box_noise(1e-3))


def test_modal_soundness_monte_carlo(rng):
    half = 0.01
    trajs = integrator_data(rng, 30, 10, [0, 1.3], ([-1, -1], [1, 1]), noise_half=half)
    chunks = chunk_trajectories(trajs, 11, lambda c: CROSSING)
    spec = box_noise(half)
    q = PedestrianQuery(Zonotope([0, 0], 0.8 * np.eye(2)), math.pi / 2, math.pi / 4, 10)
    out = modal_reach(chunks, [CROSSING], q, spec)[1]
    assert out.ok and out.kept_chunks > 4
    n = 10_000
    x = sample_points(q.X_p, n, rng)
    for R, U in zip(out.sets[1:], out.inputs):
        x = x + 0.1 * sample_points(U, n, rng) + sample_points(spec.Z_w, n, rng)
        assert contains_points(R, x).all()


def test_executor_matches_serial(rng):
    chunks = two_population_chunks(rng)
    q = PedestrianQuery(Zonotope([0, 0], np.eye(2)), 0.0, math.pi, 5)
    spec = box_noise(1e-3)
    serial = modal_reach(chunks, DEFAULT_MODES, q, spec)
    with ThreadPoolExecutor(3) as ex:
        threaded = modal_reach(chunks, DEFAULT_MODES, q, spec, executor=ex)
    for a, b in zip(serial.modes, threaded.modes):
        assert a.label == b.label and a.status == b.status and a.kept_chunks == b.kept_chunks
        for Ra, Rb in zip(a.sets, b.sets):
            assert np.array_equal(Ra.center, Rb.center) and np.array_equal(Ra.generators, Rb.generators)


def test_deterministic(rng):
    chunks = two_population_chunks(rng)
    q = PedestrianQuery(Zonotope([0, 0], np.eye(2)), 0.0, math.pi / 3, 5)
    a = modal_reach(chunks, [CROSSING], q, box_noise(1e-3))[1]
    b = modal_reach(chunks, [CROSSING], q, box_noise(1e-3))[1]
    for Ra, Rb in zip(a.sets, b.sets):
        assert Ra.center.tobytes() == Rb.center.tobytes()
        assert Ra.generators.tobytes() == Rb.generators.tobytes()


# -------------------------------------------------------------- comparison


def test_ratio_one_when_everything_is_kept(rng):
    chunks = two_population_chunks(rng)
    chunks = [TrajectoryChunk(c.points, c.inputs, c.headings, CROSSING) for c in chunks]
    q = PedestrianQuery(Zonotope([0, 0], 5 * np.eye(2)), 0.0, math.pi, 5)
    rows = compare_modal_vs_pooled(chunks, q, box_noise(1e-3), CROSSING)
    assert [r["k"] for r in rows] == [1, 2, 3, 4, 5]
    assert all(r["ratio"] == 1.0 for r in rows)


def test_singleton_areas_are_zero(rng):
    us = rng.normal(size=(5, 2)) + [1, 0]
    chunks = []
    for start in rng.normal(size=(4, 2)) * 0.1:
        xs = np.vstack([start, start + 0.1 * np.cumsum(us, axis=0)])
        chunks.append(make_chunk(xs, inputs=us))
    q = PedestrianQuery(Zonotope(chunks[0].points[0]), 0.0, math.pi, 5)
    assert pooled_reach(chunks, q, NO_NOISE).kept_chunks == 4
    rows = compare_modal_vs_pooled(chunks, q, NO_NOISE, CROSSING)
    assert all(r["modal_area"] == 0 and r["pooled_area"] == 0 and r["ratio"] is None for r in rows)


def test_compare_propagates_empty_selection(rng):
    chunks = two_population_chunks(rng)
    q = PedestrianQuery(Zonotope([50, 50], np.eye(2)), 0.0, math.pi / 3, 5)
    with pytest.raises(EmptySelection):
        compare_modal_vs_pooled(chunks, q, box_noise(1e-3), CROSSING)


def test_custom_labeler_and_modes(rng):
    special = ModeLabel(7, "jogging")
    chunks = two_population_chunks(rng)
    chunks = [TrajectoryChunk(c.points, c.inputs, c.headings, special) for c in chunks]
    q = PedestrianQuery(Zonotope([0, 0], np.eye(2)), 0.0, math.pi / 3, 5)
    assert modal_reach(chunks, [special], q, box_noise(1e-3))["jogging"].kept_chunks == 6
