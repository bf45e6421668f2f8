import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import ApplicabilityError, DetectionError
from finslerjet.general_utils.sampling import SampleConfig, TangentPoint, spiral_directions
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.jet import JetContext, JetValue

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeaklyIsotropicFit:
    """θ_i(x) and σ(x) of K = 3θ/F + σ at one position, θ = θ_i y^i."""
    x: np.ndarray
    theta: np.ndarray
    sigma: float
    residual: float

    def is_weakly_isotropic(self, tolerance: float = constants.ISOTROPY_TOLERANCE) -> bool:
        return self.residual < tolerance

    @property
    def theta_vanishes(self) -> bool:
        return float(np.max(np.abs(self.theta))) < constants.THETA_ZERO

    def as_dict(self) -> dict:
        return {"x": self.x.tolist(), "theta": self.theta.tolist(), "sigma": self.sigma, "residual": self.residual}


def fit_directions(n: int, sampler: Optional[SampleConfig] = None) -> np.ndarray:
    count = (sampler or SampleConfig()).direction_count(n)
    return spiral_directions(n, count)


def scalar_flag_residual(jets: TangentJets) -> float:
    """Relative max-norm of R^i_k - K(F²δ^i_k - F F_k y^i)."""
    R = jets.R.value
    model = jets.R_scalar_flag.value
    scale = max(float(np.max(np.abs(R))), float(np.max(np.abs(model))), constants.SCALE_FLOOR)
    return float(np.max(np.abs(R - model))) / scale


def _scalar_flag_jets(m: MetricField, x: np.ndarray, u: np.ndarray, order: int) -> TangentJets:
    jets = TangentJets(m, TangentPoint(x, u), order)
    residual = scalar_flag_residual(jets)
    if residual > constants.SCALAR_FLAG_TOLERANCE:
        raise ApplicabilityError(f"{m.name} is not of scalar flag curvature at x = {x.tolist()}! Scalar flag fit"
                                 f" residual {residual:.3e} in direction {u.tolist()}.")
    return jets


def weakly_isotropic_fit(m: MetricField, x, sampler: Optional[SampleConfig] = None,
                         directions: Optional[np.ndarray] = None) -> WeaklyIsotropicFit:
    """
    Least-squares solve of K F = 3θ_i y^i + σF over directions at fixed x.

    Parameters:
    - m: the metric
    - x: position
    - sampler: supplies the direction count (6(n+1) by default)
    - directions: explicit unit directions, overriding the deterministic spiral

    Returns:
    - the WeaklyIsotropicFit, residual relative to max |K F|
    """
    n = m.dimension
    x = m.require(x)
    directions = fit_directions(n, sampler) if directions is None else np.asarray(directions, dtype=float)
    rows, rhs = [], []
    for u in directions:
        jets = _scalar_flag_jets(m, x, u, constants.REQUIRED_ORDER["riemann"])
        F = jets.F.value
        rows.append(np.concatenate([3.0 * u, [F]]))
        rhs.append(jets.K.value * F)
    rows, rhs = np.array(rows), np.array(rhs)
    solution, _, rank, _ = np.linalg.lstsq(rows, rhs, rcond=None)
    if rank < n + 1:
        raise DetectionError(f"The weakly isotropic regression is rank deficient! Rank {rank} for {n + 1} unknowns"
                             f" from {len(directions)} directions.")
    scale = max(float(np.max(np.abs(rhs))), constants.SCALE_FLOOR)
    residual = float(np.max(np.abs(rows @ solution - rhs))) / scale
    logger.debug("weakly isotropic fit at %s: theta = %s, sigma = %.6g, residual %.3e", x.tolist(),
                 solution[:n].tolist(), solution[n], residual)
    return WeaklyIsotropicFit(x=x, theta=solution[:n], sigma=float(solution[n]), residual=residual)


def weakly_isotropic_jets(m: MetricField, x, order: int, sampler: Optional[SampleConfig] = None,
                          directions: Optional[np.ndarray] = None) -> tuple[list[JetValue], JetValue, float]:
    """
    The same regression with θ_i and σ as jets in x.

    For every direction u the identity K F = 3θ_i u^i + σF is expanded in x
    with y frozen at u; the unknowns are the position Taylor coefficients of
    θ_i and σ, so their x-derivatives up to ``order`` are fitted at once.

    Returns:
    - θ_i jets, σ jet (both in the 2n-variable context of the given order) and the relative residual
    """
    n = m.dimension
    x = m.require(x)
    directions = fit_directions(n, sampler) if directions is None else np.asarray(directions, dtype=float)
    context = JetContext(2 * n, order)
    mask = context.tables.position_mask
    size = int(mask.sum())
    blocks, rhs = [], []
    for u in directions:
        jets = _scalar_flag_jets(m, x, u, order + constants.REQUIRED_ORDER["riemann"])
        F = jets.F.truncate(order)
        KF = (jets.K * jets.F).truncate(order)
        block = np.concatenate([3.0 * u[i] * np.eye(size) for i in range(n)]
                               + [F.position_multiplication_matrix()], axis=1)
        blocks.append(block)
        rhs.append(KF.position_coefficients())
    design, rhs = np.vstack(blocks), np.concatenate(rhs)
    solution, _, rank, _ = np.linalg.lstsq(design, rhs, rcond=None)
    if rank < (n + 1) * size:
        raise DetectionError(f"The jet-valued weakly isotropic regression is rank deficient! Rank {rank} for"
                             f" {(n + 1) * size} unknowns.")
    scale = max(float(np.max(np.abs(rhs))), constants.SCALE_FLOOR)
    residual = float(np.max(np.abs(design @ solution - rhs))) / scale
    pieces = []
    for block in np.split(solution, n + 1):
        coeffs = np.zeros(context.size)
        coeffs[mask] = block
        pieces.append(JetValue(context, coeffs))
    logger.debug("jet-valued weakly isotropic fit at %s (order %d): residual %.3e", x.tolist(), order, residual)
    return pieces[:n], pieces[n], residual
