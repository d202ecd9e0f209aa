"""Run configuration loaded from a TOML file.

Example::

    chunk_size = 20
    kappa = 0.5235987755982988   # radians
    horizon = 10
    max_order = 20
    dt = 0.1
    seed = 0

    [noise]
    center = [0.0, 0.0]
    generators = [[0.025, 0.0], [0.0, 0.025]]   # one entry per generator column

    [modes.crossing_region]
    xmin = -2.0
    xmax = 2.0
    ymin = -6.0
    ymax = 6.0
    axis = 1.5707963267948966

    [query]
    center = [0.0, -5.0]
    generators = [[1.5, 0.0], [0.0, 0.6]]
    heading = 1.5707963267948966
"""

from dataclasses import asdict, dataclass, field
import hashlib
import json
import math

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .modal import CrossingGeometry, PedestrianQuery
from .reach import NoiseSpec
from .zonoset import Zonotope


class ConfigError(ValueError):
    pass


@dataclass
class SyntheticConfig:
    """Parameters of the two-mode synthetic corpus."""

    n_crossing: int = 12
    n_walking: int = 12
    length: int = 40
    speed: float = 1.3
    speed_spread: float = 0.2
    jitter: float = 0.15
    sidewalk_y: float = -6.5


@dataclass
class RunConfig:
    chunk_size: int = 20
    kappa: float = math.pi / 6
    horizon: int = 10
    max_order: float = 20
    dt: float = 0.1
    seed: int = 0
    noise_center: list = field(default_factory=lambda: [0.0, 0.0])
    noise_generators: list = field(default_factory=lambda: [[0.025, 0.0], [0.0, 0.025]])
    crossing_region: dict = field(
        default_factory=lambda: {"xmin": -2.0, "xmax": 2.0, "ymin": -6.0, "ymax": 6.0, "axis": math.pi / 2}
    )
    query_center: list = field(default_factory=lambda: [0.0, -5.0])
    query_generators: list = field(default_factory=lambda: [[1.5, 0.0], [0.0, 0.6]])
    query_heading: float = math.pi / 2
    eval_samples: int = 10_000
    synthetic: SyntheticConfig = field(default_factory=SyntheticConfig)

    def validate(self):
        if self.chunk_size < 2:
            raise ConfigError("chunk_size must be at least 2")
        if self.horizon < 1:
            raise ConfigError("horizon must be at least 1")
        if self.horizon > self.chunk_size - 1:
            raise ConfigError(f"horizon {self.horizon} exceeds chunk_size - 1 = {self.chunk_size - 1}")
        if not 0.0 <= self.kappa <= math.pi:
            raise ConfigError("kappa must lie in [0, pi]")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.max_order < 1:
            raise ConfigError("max_order must be at least 1")
        try:
            self.noise()
            self.query()
            self.geometry()
        except (TypeError, ValueError, KeyError) as err:
            raise ConfigError(str(err)) from err
        return self

    def noise(self):
        G = np.asarray(self.noise_generators, dtype=float).reshape(-1, 2).T
        return NoiseSpec(Zonotope(self.noise_center, G))

    def query(self):
        G = np.asarray(self.query_generators, dtype=float).reshape(-1, 2).T
        return PedestrianQuery(Zonotope(self.query_center, G), self.query_heading, self.kappa, self.horizon)

    def geometry(self):
        return CrossingGeometry(**self.crossing_region)

    def to_dict(self):
        return asdict(self)

    def digest(self):
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


_TOP_KEYS = {"chunk_size", "kappa", "horizon", "max_order", "dt", "seed"}


def config_from_dict(d):
    cfg = RunConfig()
    for k, v in d.items():
        if k in _TOP_KEYS:
            setattr(cfg, k, v)
        elif k == "noise":
            cfg.noise_center = list(v.get("center", cfg.noise_center))
            cfg.noise_generators = [list(g) for g in v.get("generators", cfg.noise_generators)]
        elif k == "modes":
            region = v.get("crossing_region", {})
            cfg.crossing_region = {**cfg.crossing_region, **region}
        elif k == "query":
            cfg.query_center = list(v.get("center", cfg.query_center))
            cfg.query_generators = [list(g) for g in v.get("generators", cfg.query_generators)]
            cfg.query_heading = v.get("heading", cfg.query_heading)
        elif k == "evaluate":
            cfg.eval_samples = int(v.get("samples", cfg.eval_samples))
        elif k == "synthetic":
            unknown = set(v) - set(SyntheticConfig.__dataclass_fields__)
            if unknown:
                raise ConfigError(f"unknown synthetic keys: {sorted(unknown)}")
            cfg.synthetic = SyntheticConfig(**v)
        else:
            raise ConfigError(f"unknown configuration key {k!r}")
    return cfg.validate()


def load_config(path=None):
    if path is None:
        return RunConfig().validate()
    try:
        with open(path, "rb") as fh:
            d = tomllib.load(fh)
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"{path}: {err}") from err
    return config_from_dict(d)
