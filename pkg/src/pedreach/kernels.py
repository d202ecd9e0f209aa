"""Backend selection for the 2-D geometry kernels.

The compiled extension is used when it imports; setting the environment
variable ``PEDREACH_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

if os.environ.get("PEDREACH_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

canonical_generators_2d = _impl.canonical_generators_2d
zonotope_vertices_2d = _impl.zonotope_vertices_2d
points_in_zonotope_2d = _impl.points_in_zonotope_2d
points_in_convex_polygon = _impl.points_in_convex_polygon

__all__ = [
    "BACKEND",
    "canonical_generators_2d",
    "zonotope_vertices_2d",
    "points_in_zonotope_2d",
    "points_in_convex_polygon",
]
