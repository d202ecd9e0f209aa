"""Command line entry point: ``pedreach predict|generate|evaluate``."""

import argparse
import logging
import sys

from .config import ConfigError, load_config
from .dataio import TrajectoryFormatError, truth_path_for, write_positions, write_truth
from .pipeline import EXIT_IO, EXIT_RANK, run_evaluate, run_predict
from .reach import GeneratorExplosion, RankDeficientData
from .synthetic import generate_synthetic

log = logging.getLogger("pedreach")


def _parser():
    p = argparse.ArgumentParser(prog="pedreach", description="Modal data-driven pedestrian reachable sets.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, data=True):
        sp.add_argument("--config", help="TOML run configuration (defaults are used when omitted)")
        if data:
            sp.add_argument("--data", required=True, help="trajectory CSV (trajectory_id,t,x,y)")
        sp.add_argument("--out", required=True, help="output path")
        sp.add_argument("--seed", type=int, help="override the configured random seed")

    pr = sub.add_parser("predict", help="compute modal reachable sets for the configured query")
    common(pr)
    pr.add_argument("--svg", action="store_true", help="also write one SVG per mode")
    pr.add_argument("--compare-pooled", action="store_true", help="add modal/pooled area ratios")

    ge = sub.add_parser("generate", help="write a synthetic two-mode corpus and its ground-truth sidecar")
    common(ge, data=False)

    ev = sub.add_parser("evaluate", help="containment rate, areas and runtimes against ground truth")
    common(ev)
    ev.add_argument("--truth", help="ground-truth sidecar (default: DATA.truth.json)")
    return p


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.command == "generate":
            positions, A, B, noise = generate_synthetic(cfg, cfg.seed)
            write_positions(args.out, positions)
            write_truth(truth_path_for(args.out), A, B, noise)
            log.info("wrote %d trajectories to %s", len(positions), args.out)
            return 0
        if args.command == "predict":
            code = run_predict(cfg, args.data, args.out, svg=args.svg, compare_pooled=args.compare_pooled)
        else:
            code, doc = run_evaluate(cfg, args.data, args.truth or truth_path_for(args.data), args.out)
            for m in doc["modes"]:
                if "containment_rate" in m:
                    log.info("%s: containment %.4f, area ratio at N %s", m["name"], m["containment_rate"],
                             m["area_ratio_at_N"])
        if code:
            log.error("no mode produced a reachable set (exit %d)", code)
        return code
    except RankDeficientData as err:
        log.error("%s", err)
        return EXIT_RANK
    except (OSError, ConfigError, TrajectoryFormatError, GeneratorExplosion, ValueError) as err:
        log.error("%s", err)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
