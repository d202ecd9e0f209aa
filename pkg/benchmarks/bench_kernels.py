"""Compare the compiled and pure-Python geometry kernels.

    python3 benchmarks/bench_kernels.py [--points 100000] [--repeat 5]
"""

import argparse
import importlib
import timeit

import numpy as np

from pedreach import _kernels_py


def cases(rng, n_points):
    c = rng.normal(size=2)
    G = rng.normal(size=(2, 40))
    pts = c + rng.normal(size=(n_points, 2)) * 8
    verts = _kernels_py.zonotope_vertices_2d(c, G)
    return {
        "zonotope_vertices_2d (40 gens)": lambda k: k.zonotope_vertices_2d(c, G),
        f"points_in_zonotope_2d ({n_points} pts)": lambda k: k.points_in_zonotope_2d(c, G, pts),
        f"points_in_convex_polygon ({n_points} pts)": lambda k: k.points_in_convex_polygon(verts, pts),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        compiled = importlib.import_module("pedreach._ckernels")
    except ImportError:
        compiled = None
        print("compiled extension not built; timing the Python kernels only")
    rng = np.random.default_rng(0)
    print(f"{'kernel':44s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in cases(rng, args.points).items():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:44s} {t_py:10.3f}")
            continue
        t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:44s} {t_py:10.3f} {t_c:10.3f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
