import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import DetectionError
from finslerjet.general_utils.sampling import SampleConfig, TangentPoint
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.detect.weak_isotropy import fit_directions

logger = logging.getLogger(__name__)


def quadratic_root(a: float, eta: float, xi: float) -> float:
    """
    The root F = (-η + √(η² - 4aξ)) / (2a) of aF² + ηF + ξ = 0.

    Raises:
    - DetectionError if a = 0 or the discriminant is negative
    """
    if a == 0:
        raise DetectionError("The quadratic coefficient vanishes! The equation a F² + η F + ξ = 0 is degenerate.")
    discriminant = eta * eta - 4.0 * a * xi
    if discriminant < 0:
        raise DetectionError(f"Negative discriminant! η² - 4aξ = {discriminant} for a = {a}, η = {eta}, ξ = {xi}.")
    return (-eta + np.sqrt(discriminant)) / (2.0 * a)


@dataclass(frozen=True)
class QuadraticReconstruction:
    """F rebuilt pointwise from a F² + η F + ξ = 0 with a = h, η = 2(f_{|0} + σθ), ξ = 3θ² - ½σ_{|0|0}."""
    x: np.ndarray
    a: float
    eta: np.ndarray
    directions: np.ndarray
    xi: np.ndarray
    F: np.ndarray
    reconstructed: np.ndarray
    fit_residual: float

    @property
    def error(self) -> float:
        return float(np.max(np.abs(self.F - self.reconstructed)) / max(float(np.max(np.abs(self.F))),
                                                                        constants.SCALE_FLOOR))

    def as_dict(self) -> dict:
        return {"x": self.x.tolist(), "a": self.a, "eta": self.eta.tolist(), "fit_residual": self.fit_residual,
                "error": self.error}


def quadratic_reconstruction(m: MetricField, x, source=None, sampler: Optional[SampleConfig] = None,
                             order: int = constants.REQUIRED_ORDER["berwald"]) -> QuadraticReconstruction:
    """
    Fits h and f_{x^i} of the σ_{|0|0} equation at x and solves the resulting
    quadratic for F in every sampled direction.

    Raises:
    - DetectionError if the fitted a = h vanishes (relative to the other coefficients)
    """
    from finslerjet.identities.isotropic import covariant_invariants, h_existence_fit
    from finslerjet.identities.isotropy_source import IsotropySource

    x = m.require(x)
    sampler = sampler or SampleConfig()
    source = source or IsotropySource.for_metric(m, sampler=sampler)
    directions = fit_directions(m.dimension, sampler)
    samples = [TangentJets(m, TangentPoint(x, u), order) for u in directions]
    fit = h_existence_fit(samples, source)
    eta = 2.0 * (fit.f_x + fit.sigma * fit.theta)
    xi, F = [], []
    for jets in samples:
        c = covariant_invariants(jets, source, depth=2)
        xi.append(3.0 * c.theta * c.theta - 0.5 * c.sigma_00)
        F.append(c.F)
    xi, F = np.array(xi), np.array(F)
    scale = max(float(np.max(np.abs(eta))), float(np.max(np.abs(xi))), constants.SCALE_FLOOR)
    if abs(fit.h) <= constants.SCALE_FLOOR * max(scale, 1.0):
        raise DetectionError(f"The fitted quadratic coefficient a = h vanishes at x = {x.tolist()}! h = {fit.h}.")
    reconstructed = np.array([quadratic_root(fit.h, float(eta @ u), float(z)) for u, z in zip(directions, xi)])
    logger.debug("quadratic reconstruction at %s: a = %.6g, eta = %s", x.tolist(), fit.h, eta.tolist())
    return QuadraticReconstruction(x=x, a=fit.h, eta=eta, directions=directions, xi=xi, F=F,
                                   reconstructed=reconstructed, fit_residual=fit.residual.residual)
