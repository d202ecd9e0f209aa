"""End-to-end predict and evaluate runs behind the CLI."""

import json
import os

import numpy as np

from . import report
from .dataio import atomic_write, load_trajectories, read_truth
from .modal import (
    DEFAULT_MODES,
    chunk_trajectories,
    compare_modal_vs_pooled,
    default_crossing_oracle,
    modal_reach,
    pooled_reach,
)
from .zonoset import contains_points, sample_points

EXIT_OK = 0
EXIT_IO = 1
EXIT_EMPTY = 2
EXIT_RANK = 3


def exit_code_for(result):
    statuses = [m.status for m in result.modes]
    if "ok" in statuses:
        return EXIT_OK
    if "rank_deficient" in statuses:
        return EXIT_RANK
    return EXIT_EMPTY


def build_chunks(cfg, data_path):
    trajectories = load_trajectories(data_path, cfg.dt)
    geometry = cfg.geometry()
    return chunk_trajectories(trajectories, cfg.chunk_size, lambda c: default_crossing_oracle(c, geometry))


def _comparison(chunks, q, spec, cfg, result):
    pooled = pooled_reach(chunks, q, spec, cfg.max_order)
    block = {"pooled_status": pooled.status, "pooled_chunks": pooled.kept_chunks, "modes": []}
    if pooled.ok:
        for m in result.modes:
            if m.ok:
                rows = compare_modal_vs_pooled(chunks, q, spec, m.label, cfg.max_order, pooled=pooled, modal=m)
                block["modes"].append({"id": m.label.id, "steps": rows})
    return pooled, block


def run_predict(cfg, data_path, out_path, svg=False, compare_pooled=False, modes=DEFAULT_MODES):
    """Write the prediction JSON (and optional SVGs); return the exit code."""
    chunks = build_chunks(cfg, data_path)
    q, spec = cfg.query(), cfg.noise()
    result = modal_reach(chunks, modes, q, spec, cfg.max_order)
    doc = {
        "meta": {"config_hash": cfg.digest(), "seed": int(cfg.seed)},
        "modes": [report.mode_record(m) for m in result.modes],
    }
    if compare_pooled:
        doc["comparison"] = _comparison(chunks, q, spec, cfg, result)[1]
    atomic_write(out_path, report.dumps(doc))
    if svg:
        stem = os.path.splitext(os.fspath(out_path))[0]
        for m in result.modes:
            if m.ok:
                atomic_write(f"{stem}.{m.label.name}.svg", report.render_svg(m, q.X_p))
    return exit_code_for(result)


def rollout_containment(outcome, A, B, noise_samples, n, rng):
    """Fraction of simulated true continuations inside each reachable set.

    Initial states are drawn from the start set, inputs from the per-step
    input zonotopes and noise by resampling the recorded noise vectors.
    Returns the per-step rates and the rate of rollouts contained at every step.
    """
    x = sample_points(outcome.sets[0], n, rng)
    alive = np.ones(n, dtype=bool)
    rates = []
    for k, U in enumerate(outcome.inputs):
        u = sample_points(U, n, rng)
        w = noise_samples[rng.integers(len(noise_samples), size=n)]
        x = x @ A.T + u @ B.T + w
        inside = contains_points(outcome.sets[k + 1], x)
        alive &= inside
        rates.append(float(inside.mean()))
    return rates, float(alive.mean())


def run_evaluate(cfg, data_path, truth_path, out_path, modes=DEFAULT_MODES):
    chunks = build_chunks(cfg, data_path)
    A, B, W = read_truth(truth_path)
    q, spec = cfg.query(), cfg.noise()
    result = modal_reach(chunks, modes, q, spec, cfg.max_order)
    pooled, comparison = _comparison(chunks, q, spec, cfg, result)
    ratios = {c["id"]: c["steps"] for c in comparison["modes"]}
    rng = np.random.default_rng(cfg.seed)
    records = []
    for m in result.modes:
        rec = {"id": m.label.id, "name": m.label.name, "status": m.status, "kept_chunks": m.kept_chunks}
        if m.ok:
            rates, overall = rollout_containment(m, A, B, W, cfg.eval_samples, rng)
            areas = [s["area"] for s in (report.zonotope_record(k, R) for k, R in enumerate(m.sets[1:], 1))]
            rec["containment_rate"] = overall
            rec["steps"] = [
                {"k": k, "area": a, "containment_rate": r, "runtime_s": t}
                for k, (a, r, t) in enumerate(zip(areas, rates, m.step_seconds), start=1)
            ]
            steps = ratios.get(m.label.id)
            rec["area_ratio_at_N"] = steps[-1]["ratio"] if steps else None
        records.append(rec)
    doc = {
        "meta": {"config_hash": cfg.digest(), "seed": int(cfg.seed), "samples": int(cfg.eval_samples)},
        "modes": records,
        "comparison": comparison,
    }
    atomic_write(out_path, json.dumps(doc, indent=1) + "\n")
    return exit_code_for(result), doc
