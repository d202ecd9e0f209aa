"""Trajectory CSV and ground-truth sidecar I/O."""

import csv
import io
import json
import os
import tempfile

import numpy as np

from .reach import StateInputTrajectory

CSV_HEADER = ["trajectory_id", "t", "x", "y"]


class TrajectoryFormatError(ValueError):
    pass


def atomic_write(path, data):
    """Write ``data`` (str or bytes) to a temp file, then rename over ``path``."""
    path = os.fspath(path)
    if isinstance(data, str):
        data = data.encode("utf-8")
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_positions(path):
    """Read the CSV into ``{trajectory_id: (T+1, 2) array}`` in file order of ids."""
    groups = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CSV_HEADER:
            raise TrajectoryFormatError(f"{path}: expected header {','.join(CSV_HEADER)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise TrajectoryFormatError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            tid = row[0]
            try:
                t = int(row[1])
                x, y = float(row[2]), float(row[3])
            except ValueError as err:
                raise TrajectoryFormatError(f"{path}:{lineno}: {err}") from err
            if not (np.isfinite(x) and np.isfinite(y)):
                raise TrajectoryFormatError(f"{path}:{lineno}: non-finite coordinate")
            rows = groups.setdefault(tid, {})
            if t in rows:
                raise TrajectoryFormatError(f"{path}:{lineno}: duplicate sample ({tid}, {t})")
            rows[t] = (x, y)
    out = {}
    for tid, rows in groups.items():
        ts = sorted(rows)
        if ts != list(range(len(ts))):
            raise TrajectoryFormatError(f"{path}: trajectory {tid!r} has non-consecutive t (must run 0..T)")
        if len(ts) < 2:
            raise TrajectoryFormatError(f"{path}: trajectory {tid!r} has fewer than 2 points")
        out[tid] = np.array([rows[t] for t in ts])
    return out


def derive_inputs(positions, dt):
    """Forward-difference velocities; the last state has no input."""
    return np.diff(positions, axis=0) / dt


def load_trajectories(path, dt):
    return [StateInputTrajectory(p, derive_inputs(p, dt), dt) for p in read_positions(path).values()]


def format_positions(positions):
    """CSV text for ``{trajectory_id: (T+1, 2) array}``; floats use repr so
    reading back is exact."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for tid, pts in positions.items():
        for t, (x, y) in enumerate(pts):
            w.writerow([tid, t, repr(float(x)), repr(float(y))])
    return buf.getvalue()


def write_positions(path, positions):
    atomic_write(path, format_positions(positions))


def write_truth(path, A, B, noise):
    """Sidecar ``{A, B, noise: [{traj, t, w}]}``."""
    doc = {
        "A": np.asarray(A).tolist(),
        "B": np.asarray(B).tolist(),
        "noise": [{"traj": tid, "t": int(t), "w": [float(v) for v in w]} for tid, t, w in noise],
    }
    atomic_write(path, json.dumps(doc, indent=1) + "\n")


def read_truth(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        A = np.asarray(doc["A"], dtype=float)
        B = np.asarray(doc["B"], dtype=float)
        W = np.asarray([n["w"] for n in doc["noise"]], dtype=float).reshape(-1, A.shape[0])
    except (KeyError, TypeError, ValueError) as err:
        raise TrajectoryFormatError(f"{path}: malformed ground-truth sidecar ({err})") from err
    return A, B, W


def truth_path_for(data_path):
    return os.fspath(data_path) + ".truth.json"
