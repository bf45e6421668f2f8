import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import ApplicabilityError, DetectionError
from finslerjet.general_utils.sampling import SampleConfig, TangentPoint, position_grid
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.detect.randers_split import RandersSplit, randers_split
from finslerjet.detect.weak_isotropy import (WeaklyIsotropicFit, fit_directions, scalar_flag_residual,
                                             weakly_isotropic_fit)

logger = logging.getLogger(__name__)


def detect_scalar_flag(m: MetricField, x, sampler: Optional[SampleConfig] = None) -> float:
    """Largest relative scalar flag residual over the fit directions at x."""
    x = m.require(x)
    order = constants.REQUIRED_ORDER["riemann"]
    return max(scalar_flag_residual(TangentJets(m, TangentPoint(x, u), order))
               for u in fit_directions(m.dimension, sampler))


@dataclass(frozen=True)
class GridVerdict:
    x: np.ndarray
    scalar_flag_residual: float
    isotropy: Optional[WeaklyIsotropicFit]
    randers: Optional[RandersSplit]
    randers_error: Optional[str] = None

    @property
    def is_scalar_flag(self) -> bool:
        return self.scalar_flag_residual < constants.SCALAR_FLAG_TOLERANCE

    @property
    def is_weakly_isotropic(self) -> bool:
        return self.isotropy is not None and self.isotropy.is_weakly_isotropic()

    @property
    def is_randers(self) -> bool:
        return self.randers is not None and self.randers.is_randers()

    def isotropy_verdict(self) -> str:
        if not self.is_weakly_isotropic:
            return "no"
        if self.isotropy.theta_vanishes:
            return f"yes (θ=0, σ={self.isotropy.sigma:.6g})"
        return "yes (θ≠0)"

    def randers_verdict(self) -> str:
        return "yes" if self.is_randers else "no"

    def as_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "scalar_flag_residual": self.scalar_flag_residual,
            "scalar_flag": self.is_scalar_flag,
            "weakly_isotropic": self.isotropy_verdict(),
            "isotropy_fit": self.isotropy.as_dict() if self.isotropy else None,
            "randers": self.randers_verdict(),
            "randers_split": self.randers.as_dict() if self.randers else None,
            "randers_error": self.randers_error,
        }


def detect_at(m: MetricField, x, sampler: Optional[SampleConfig] = None) -> GridVerdict:
    """Scalar flag fit, weakly isotropic fit and Randers split at one position."""
    x = m.require(x)
    residual = detect_scalar_flag(m, x, sampler)
    isotropy = None
    if residual < constants.SCALAR_FLAG_TOLERANCE:
        try:
            isotropy = weakly_isotropic_fit(m, x, sampler)
        except (ApplicabilityError, DetectionError) as e:
            logger.debug("weakly isotropic fit failed at %s: %s", x.tolist(), e)
    split, error = None, None
    try:
        split = randers_split(m, x, sampler)
    except DetectionError as e:
        error = str(e)
    return GridVerdict(x=x, scalar_flag_residual=residual, isotropy=isotropy, randers=split, randers_error=error)


def detect_over_grid(m: MetricField, points_per_axis: int = constants.DEFAULT_GRID,
                     sampler: Optional[SampleConfig] = None, workers: int = 1) -> list[GridVerdict]:
    """Verdicts over a regular grid of the sampling box, in grid order."""
    sampler = sampler or SampleConfig()
    grid = position_grid(m, points_per_axis, sampler)
    logger.info("detecting on %d grid positions of %s", len(grid), m.name)
    if workers <= 1:
        return [detect_at(m, x, sampler) for x in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda x: detect_at(m, x, sampler), grid))
