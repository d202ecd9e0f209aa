"""Modal data-driven reachable sets for pedestrian motion prediction."""

from .kernels import BACKEND
from .modal import (
    CROSSING,
    DEFAULT_MODES,
    OTHER,
    WALKING_ALONG,
    CrossingGeometry,
    EmptySelection,
    ModalReachResult,
    ModeLabel,
    PedestrianQuery,
    TrajectoryChunk,
    chunk_trajectories,
    compare_modal_vs_pooled,
    default_crossing_oracle,
    estimate_input_zonotope,
    modal_reach,
    select_chunks,
)
from .reach import (
    DataMatrices,
    ModelSet,
    NoiseSpec,
    RankDeficientData,
    StateInputTrajectory,
    build_data_matrices,
    build_noise_matrix_zonotope,
    compute_model_set,
    reach_horizon,
    reach_step,
)
from .zonoset import (
    DimensionError,
    IntervalBox,
    MatrixZonotope,
    Polygon2D,
    Zonotope,
    cartesian_product,
    contains_point,
    contains_points,
    interval_hull,
    linear_map,
    minkowski_sum,
    mz_contains_matrix,
    mz_linear_map_right,
    mz_shift,
    mz_times_zonotope,
    polygon_area,
    reduce_order,
    to_polygon,
)

__version__ = "0.1.0"
