"""Behavior-mode splitting of trajectory data and modal reachable sets.

Historical trajectories are cut into fixed-length chunks, each chunk is
labeled by a pluggable oracle, and for every mode only the chunks that
match the pedestrian's current position set and heading are used to build
the model set and the per-step input zonotopes.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .reach import (
    DEFAULT_MAX_ORDER,
    RankDeficientData,
    StateInputTrajectory,
    build_data_matrices,
    compute_model_set,
    reach_horizon,
)
from .zonoset import Zonotope, contains_point, polygon_area, to_polygon


class EmptySelection(ValueError):
    """No chunk passed the selection criteria for a mode."""


@dataclass(frozen=True)
class ModeLabel:
    id: int
    name: str


CROSSING = ModeLabel(1, "crossing")
WALKING_ALONG = ModeLabel(2, "walking-along")
OTHER = ModeLabel(3, "other")
DEFAULT_MODES = (CROSSING, WALKING_ALONG, OTHER)


@dataclass(frozen=True, eq=False)
class TrajectoryChunk:
    points: np.ndarray
    inputs: np.ndarray
    headings: np.ndarray
    label: ModeLabel = None
    source: tuple = ()

    @property
    def size(self):
        return self.points.shape[0]

    def as_trajectory(self):
        return StateInputTrajectory(self.points, self.inputs)


@dataclass(frozen=True)
class PedestrianQuery:
    X_p: Zonotope
    alpha_p: float
    kappa: float
    N: int

    def __post_init__(self):
        if not 0.0 <= self.kappa <= math.pi:
            raise ValueError(f"kappa must lie in [0, pi], got {self.kappa}")
        if self.N < 1:
            raise ValueError("horizon N must be at least 1")
        if self.X_p.dim != 2:
            raise ValueError("the position set X_p must be 2-D")


@dataclass
class ModeOutcome:
    label: ModeLabel
    status: str  # "ok", "empty_selection" or "rank_deficient"
    kept_chunks: int
    sets: list = field(default_factory=list)  # R_0 = X_p, R_1 .. R_N
    inputs: list = field(default_factory=list)  # U_0 .. U_{N-1}
    step_seconds: list = field(default_factory=list)
    message: str = ""

    @property
    def ok(self):
        return self.status == "ok"


@dataclass
class ModalReachResult:
    modes: list

    def __getitem__(self, name):
        for m in self.modes:
            if m.label.name == name or m.label.id == name:
                return m
        raise KeyError(name)


@dataclass(frozen=True)
class CrossingGeometry:
    """Axis-aligned crossing region and the direction (radians) one crosses it in."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    axis: float = math.pi / 2

    def contains(self, p):
        return self.xmin <= p[0] <= self.xmax and self.ymin <= p[1] <= self.ymax


def wrap_angle(a):
    """Map an angle into (-pi, pi]."""
    return math.pi - (math.pi - a) % (2 * math.pi)


def _axis_distance(heading, axis):
    d = abs(wrap_angle(heading - axis))
    return min(d, math.pi - d)


def chunk_headings(points):
    d = np.diff(points, axis=0)
    h = np.arctan2(d[:, 1], d[:, 0])
    return np.append(h, h[-1])


def chunk_trajectories(trajectories, c_s, labeler):
    """Cut every trajectory into consecutive, non-overlapping chunks of ``c_s``
    points and label each one. Trailing points that do not fill a chunk are
    dropped."""
    if c_s < 2:
        raise ValueError("chunk size must be at least 2")
    chunks = []
    for ti, tr in enumerate(trajectories):
        n = tr.states.shape[0]
        for start in range(0, n - c_s + 1, c_s):
            pts = tr.states[start : start + c_s]
            chunk = TrajectoryChunk(
                points=pts,
                inputs=tr.inputs[start : start + c_s - 1],
                headings=chunk_headings(pts),
                source=(ti, start),
            )
            chunks.append(replace(chunk, label=labeler(chunk)))
    return chunks


def default_crossing_oracle(chunk, geometry):
    h0 = float(chunk.headings[0])
    # closed pi/4 cones; a tie goes to the crossing axis
    along_crossing = _axis_distance(h0, geometry.axis) <= math.pi / 4 + 1e-12
    if along_crossing and geometry.contains(chunk.points[0]):
        return CROSSING
    if _axis_distance(h0, geometry.axis + math.pi / 2) <= math.pi / 4 + 1e-12:
        return WALKING_ALONG
    return OTHER


def heading_matches(heading, alpha_p, kappa):
    d = wrap_angle(heading - alpha_p)
    # (-kappa, kappa] is empty at kappa = 0; an exact heading match still counts
    return d == 0.0 or -kappa < d <= kappa


def select_chunks(chunks, mode, q):
    return [
        c
        for c in chunks
        if c.label is not None
        and c.label.id == mode.id
        and contains_point(q.X_p, c.points[0])
        and heading_matches(float(c.headings[0]), q.alpha_p, q.kappa)
    ]


def estimate_input_zonotope(kept, k):
    """``<mean, diag(max |u - mean|)>`` of the k-th input over the kept chunks."""
    if not kept:
        raise EmptySelection("no chunks to estimate the input set from")
    if not 0 <= k < kept[0].size - 1:
        raise IndexError(f"input step {k} out of range for chunks of {kept[0].size} points")
    U = np.array([c.inputs[k] for c in kept])
    mu = U.mean(axis=0)
    sigma = np.abs(U - mu).max(axis=0)
    return Zonotope(mu, np.diag(sigma))


def _reach_from_kept(label, kept, q, spec, max_order):
    if not kept:
        return ModeOutcome(label, "empty_selection", 0, message="no chunk satisfies the selection criteria")
    try:
        model = compute_model_set(build_data_matrices([c.as_trajectory() for c in kept]), spec)
    except RankDeficientData as err:
        return ModeOutcome(label, "rank_deficient", len(kept), message=str(err))
    inputs = [estimate_input_zonotope(kept, k) for k in range(q.N)]
    timings = []
    sets = reach_horizon(model, q.X_p, inputs, spec, max_order, timings=timings)
    return ModeOutcome(label, "ok", len(kept), sets=[q.X_p] + sets, inputs=inputs, step_seconds=timings)


def _check_horizon(chunks, q):
    if chunks and q.N > chunks[0].size - 1:
        raise ValueError(f"horizon N = {q.N} exceeds chunk size - 1 = {chunks[0].size - 1}")


def modal_reach(chunks, modes, q, spec, max_order=DEFAULT_MAX_ORDER, executor=None):
    """Per-mode reachable sets from mode-relevant chunks only.

    Modes whose selection is empty or whose data are rank deficient are
    returned with the matching status rather than raised. ``executor``
    (e.g. a ``ThreadPoolExecutor``) runs the modes concurrently; results
    are always ordered by mode id.
    """
    _check_horizon(chunks, q)

    def run(mode):
        return _reach_from_kept(mode, select_chunks(chunks, mode, q), q, spec, max_order)

    ordered = sorted(modes, key=lambda m: m.id)
    outcomes = list(executor.map(run, ordered)) if executor is not None else [run(m) for m in ordered]
    return ModalReachResult(outcomes)


def pooled_reach(chunks, q, spec, max_order=DEFAULT_MAX_ORDER):
    """Baseline: the same pipeline with every chunk kept."""
    _check_horizon(chunks, q)
    return _reach_from_kept(ModeLabel(0, "pooled"), list(chunks), q, spec, max_order)


def area_profile(outcome):
    return [polygon_area(to_polygon(R)) for R in outcome.sets[1:]]


def compare_modal_vs_pooled(chunks, q, spec, mode, max_order=DEFAULT_MAX_ORDER, pooled=None, modal=None):
    """Per-step areas of the modal and the pooled reachable sets.

    Returns a list of ``{k, modal_area, pooled_area, ratio}`` for k = 1..N;
    the ratio is None when the pooled area is zero.
    """
    if modal is None:
        modal = modal_reach(chunks, [mode], q, spec, max_order).modes[0]
    if pooled is None:
        pooled = pooled_reach(chunks, q, spec, max_order)
    for o in (modal, pooled):
        if not o.ok:
            raise (EmptySelection if o.status == "empty_selection" else RankDeficientData)(
                f"{o.label.name}: {o.message}"
            )
    rows = []
    for k, (a, b) in enumerate(zip(area_profile(modal), area_profile(pooled)), start=1):
        rows.append({"k": k, "modal_area": a, "pooled_area": b, "ratio": a / b if b > 0 else None})
    return rows
