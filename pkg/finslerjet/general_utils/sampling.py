import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.stats import norm, qmc

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampleConfig:
    """Reproducible sampling of tangent points; identical configs give identical samples."""
    num_points: int = constants.DEFAULT_POINTS
    seed: int = constants.DEFAULT_SEED
    box: Optional[Sequence[Sequence[float]]] = None
    normalize_F: bool = True
    directions: Optional[int] = None

    def bounds(self, dimension: int) -> np.ndarray:
        if self.box is None:
            return np.tile(np.array(constants.DEFAULT_BOX, dtype=float), (dimension, 1))
        box = np.asarray(self.box, dtype=float)
        if box.shape == (2,):
            box = np.tile(box, (dimension, 1))
        if box.shape != (dimension, 2) or np.any(box[:, 0] > box[:, 1]):
            raise DomainError(f"The sampling box must provide one [low, high] interval per axis! Got {box.tolist()}.")
        return box

    def direction_count(self, dimension: int) -> int:
        if self.directions is not None:
            return self.directions
        return constants.DIRECTIONS_PER_UNKNOWN * (dimension + 1)


@dataclass(frozen=True)
class TangentPoint:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise DomainError(f"Position and direction must be vectors of the same length! Got {x.shape} and"
                              f" {y.shape}.")
        if np.linalg.norm(y) == 0:
            raise DomainError("The direction of a tangent point must be nonzero!")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def dimension(self) -> int:
        return len(self.x)

    def key(self) -> tuple:
        return tuple(self.x.tolist()) + tuple(self.y.tolist())


def sample_positions(metric, config: SampleConfig, count: Optional[int] = None, seed_offset: int = 0) -> np.ndarray:
    count = config.num_points if count is None else count
    bounds = metric.sampling_bounds(config)
    rng = np.random.default_rng(config.seed + seed_offset)
    positions = []
    attempts = 0
    while len(positions) < count:
        attempts += 1
        if attempts > constants.MAX_REJECTION_ATTEMPTS * max(count, 1):
            raise DomainError(f"Could not draw {count} positions inside the domain of {metric.name}!"
                              f" Accepted {len(positions)} after {attempts - 1} attempts.")
        x = rng.uniform(bounds[:, 0], bounds[:, 1])
        if metric.domain_check(x):
            positions.append(x)
    return np.array(positions).reshape(count, metric.dimension)


def sample_tangent_points(metric, config: SampleConfig) -> list[TangentPoint]:
    """Positions uniform in the box (rejected outside the domain), directions uniform on the sphere."""
    positions = sample_positions(metric, config)
    rng = np.random.default_rng(config.seed + 1)
    points = []
    for x in positions:
        y = rng.standard_normal(metric.dimension)
        y /= np.linalg.norm(y)
        if config.normalize_F:
            y = y / metric.value(x, y)
        points.append(TangentPoint(x, y))
    logger.debug("sampled %d tangent points for %s (seed %d)", len(points), metric.name, config.seed)
    return points


def spiral_directions(dimension: int, count: int) -> np.ndarray:
    """
    Deterministic quasi-uniform unit vectors.

    Parameters:
    - dimension: n
    - count: number of directions

    Returns:
    - array of shape (count, n)
    """
    if dimension == 2:
        angles = 2.0 * np.pi * (np.arange(count) + 0.5) / count
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if dimension == 3:
        k = np.arange(count) + 0.5
        z = 1.0 - 2.0 * k / count
        r = np.sqrt(1.0 - z * z)
        phi = np.pi * (1.0 + np.sqrt(5.0)) * k
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    halton = qmc.Halton(d=dimension, scramble=False)
    points = norm.ppf(halton.random(count + 1)[1:])
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def random_directions(dimension: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((count, dimension))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def position_grid(metric, points_per_axis: int, config: SampleConfig) -> np.ndarray:
    """Regular grid over the sampling box, restricted to the metric domain."""
    bounds = metric.sampling_bounds(config)
    axes = [np.linspace(lo, hi, points_per_axis) if points_per_axis > 1 else np.array([(lo + hi) / 2])
            for lo, hi in bounds]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, metric.dimension)
    inside = [x for x in grid if metric.domain_check(x)]
    if not inside:
        raise DomainError(f"No grid position lies inside the domain of {metric.name}!")
    return np.array(inside)
