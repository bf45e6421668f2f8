import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import DetectionError
from finslerjet.general_utils.sampling import SampleConfig, random_directions
from finslerjet.geometry.metric_field import MetricField
from finslerjet.jet import JetContext, seed_variable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RandersSplit:
    """F = α + β with α = √(a_ij y^i y^j) and β = b_i y^i, recovered at one position."""
    x: np.ndarray
    alpha_matrix: np.ndarray
    beta: np.ndarray
    quadratic_residual: float
    linear_residual: float
    beta_norm: float
    reconstruction_error: float

    def is_randers(self, tolerance: float = constants.RANDERS_TOLERANCE) -> bool:
        return (self.quadratic_residual < tolerance and self.linear_residual < tolerance
                and self.beta_norm < 1.0)

    def as_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "alpha_matrix": self.alpha_matrix.tolist(),
            "beta": self.beta.tolist(),
            "quadratic_residual": self.quadratic_residual,
            "linear_residual": self.linear_residual,
            "beta_norm": self.beta_norm,
            "reconstruction_error": self.reconstruction_error,
        }


def _even_odd(m: MetricField, x: np.ndarray, Y):
    X = list(x)
    forward = m.evaluate(X, Y)
    backward = m.evaluate(X, [-y for y in Y])
    return 0.5 * (forward + backward), 0.5 * (forward - backward)


def randers_split(m: MetricField, x, sampler: Optional[SampleConfig] = None,
                  directions: Optional[np.ndarray] = None) -> RandersSplit:
    """
    Reversibilization split of F at x.

    α is the even part and β the odd part of F in y; a_ij is read off as the
    Hessian of α²/2 and b_i as the gradient of β at one direction, and both
    are then tested on fresh directions.

    Raises:
    - DetectionError if the fitted a_ij is not positive definite
    """
    n = m.dimension
    x = m.require(x)
    sampler = sampler or SampleConfig()
    context = JetContext(2 * n, 2)
    probe = np.ones(n) / np.sqrt(n)
    Y = [seed_variable(context, n + i, probe[i]) for i in range(n)]
    alpha, beta = _even_odd(m, x, Y)
    half_alpha_sq = 0.5 * alpha * alpha
    A = np.array([[half_alpha_sq.diff(n + i).diff(n + j).value for j in range(n)] for i in range(n)])
    A = 0.5 * (A + A.T)
    b = np.array([beta.diff(n + i).value for i in range(n)])
    eigenvalues = np.linalg.eigvalsh(A)
    if eigenvalues[0] <= 0:
        raise DetectionError(f"The fitted a_ij is not positive definite at x = {x.tolist()}! Eigenvalues:"
                             f" {eigenvalues.tolist()}.")

    if directions is None:
        directions = random_directions(n, sampler.direction_count(n), sampler.seed)
    U = np.asarray(directions, dtype=float)
    alpha_u, beta_u = _even_odd(m, x, [U[:, i] for i in range(n)])
    F_u = alpha_u + beta_u
    quadratic = np.einsum("si,ij,sj->s", U, A, U)
    alpha_scale = max(float(np.max(alpha_u ** 2)), constants.SCALE_FLOOR)
    quadratic_residual = float(np.max(np.abs(alpha_u ** 2 - quadratic))) / alpha_scale
    linear_residual = float(np.max(np.abs(beta_u - U @ b))) / max(float(np.max(alpha_u)), constants.SCALE_FLOOR)
    reconstruction = np.sqrt(np.maximum(quadratic, 0.0)) + U @ b
    reconstruction_error = float(np.max(np.abs(F_u - reconstruction)) / max(float(np.max(np.abs(F_u))),
                                                                             constants.SCALE_FLOOR))
    beta_norm = float(np.sqrt(b @ np.linalg.solve(A, b)))
    logger.debug("Randers split at %s: quadratic residual %.3e, linear residual %.3e, |beta| %.6g", x.tolist(),
                 quadratic_residual, linear_residual, beta_norm)
    return RandersSplit(x=x, alpha_matrix=A, beta=b, quadratic_residual=quadratic_residual,
                        linear_residual=linear_residual, beta_norm=beta_norm,
                        reconstruction_error=reconstruction_error)
