import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.special import gamma, roots_jacobi

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import QuadratureError, DetectionError
from finslerjet.general_utils.sampling import TangentPoint, spiral_directions
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.jet import JetValue, seed_variable, einsum

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def sphere_rule(dimension: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Product quadrature on the unit sphere S^{n-1} ⊂ R^n.

    The last n-1 coordinates are split off recursively, u = (t, √(1-t²) v),
    with Gauss-Jacobi nodes in t and the trapezoidal rule on the circle.

    Parameters:
    - dimension: n ≥ 2
    - resolution: Gauss nodes per polar angle (the circle gets twice as many)

    Returns:
    - nodes of shape (Q, n), weights of shape (Q,)
    """
    if dimension == 2:
        count = 2 * resolution
        angles = 2.0 * np.pi * np.arange(count) / count
        nodes = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        return nodes, np.full(count, 2.0 * np.pi / count)
    alpha = (dimension - 3) / 2.0
    t, w = roots_jacobi(resolution, alpha, alpha)
    sub_nodes, sub_weights = sphere_rule(dimension - 1, resolution)
    radius = np.sqrt(1.0 - t * t)
    nodes = np.concatenate([np.column_stack([np.full(len(sub_nodes), ti), ri * sub_nodes])
                            for ti, ri in zip(t, radius)])
    weights = np.concatenate([wi * sub_weights for wi in w])
    return nodes, weights


def unit_ball_volume(dimension: int) -> float:
    return float(np.pi ** (dimension / 2.0) / gamma(dimension / 2.0 + 1.0))


def _indicatrix_volume(m: MetricField, X, nodes: np.ndarray, weights: np.ndarray):
    n = m.dimension
    F = m.evaluate(list(X), [nodes[:, i] for i in range(n)])
    return (F ** (-n) * weights).sum() * (1.0 / n)


def _converged(m: MetricField, X, resolutions: Sequence[int]):
    estimates = []
    for resolution in resolutions:
        nodes, weights = sphere_rule(m.dimension, resolution)
        estimates.append(unit_ball_volume(m.dimension) / _indicatrix_volume(m, X, nodes, weights))
    coarse, fine = estimates[-2], estimates[-1]
    coarse_c = coarse.coeffs if isinstance(coarse, JetValue) else np.asarray(coarse)
    fine_c = fine.coeffs if isinstance(fine, JetValue) else np.asarray(fine)
    error = float(np.max(np.abs(fine_c - coarse_c)) / max(float(np.max(np.abs(fine_c))), constants.SCALE_FLOOR))
    logger.debug("volume density quadrature at resolutions %s: relative change %.3e", tuple(resolutions), error)
    if error > constants.QUADRATURE_TOLERANCE:
        raise QuadratureError(f"The spherical quadrature did not converge for {m.name}! Relative change between"
                              f" resolutions {tuple(resolutions)}: {error:.3e}.", estimated_error=error)
    return fine


def bh_volume_density(m: MetricField, x, resolutions: Sequence[int] = constants.QUADRATURE_RESOLUTIONS) -> float:
    """Busemann-Hausdorff volume density σ_F(x) = vol(B^n) / vol{y : F(x, y) < 1}."""
    x = m.require(x)
    return float(_converged(m, x, resolutions))


def volume_density_jet(m: MetricField, jets: TangentJets, order: int = 1,
                       resolutions: Sequence[int] = constants.QUADRATURE_RESOLUTIONS) -> JetValue:
    """σ_F as a jet in x (y-independent), in the variable layout of ``jets``."""
    context = jets.context.lower(min(order, jets.order))
    X = [seed_variable(context, i, jets.point.x[i]) for i in range(m.dimension)]
    sigma = _converged(m, X, resolutions)
    if not isinstance(sigma, JetValue):
        # x-independent metrics never touch the seeded jets
        sigma = JetValue.constant(context, sigma)
    return sigma


def s_curvature_jet(m: MetricField, jets: TangentJets) -> JetValue:
    """S = ∂G^m/∂y^m - y^m ∂(ln σ_F)/∂x^m."""
    log_sigma = volume_density_jet(m, jets, order=max(jets.order - 2, 1)).log()
    return jets.N.trace() - einsum("m,m->", jets.grad_x(log_sigma), jets.y)


def s_curvature(m: MetricField, p: TangentPoint) -> float:
    jets = TangentJets(m, p, constants.REQUIRED_ORDER["connection"])
    return float(s_curvature_jet(m, jets).value)


@dataclass(frozen=True)
class SCurvatureFit:
    c: float
    eta: np.ndarray
    residual: float


def almost_isotropic_s_fit(m: MetricField, x, directions: Optional[int] = None) -> SCurvatureFit:
    """
    Least-squares fit of S = (n+1)(c F + η_i y^i) over directions at fixed x.

    The residual is relative to the largest |S| seen.
    """
    n = m.dimension
    x = m.require(x)
    count = constants.DIRECTIONS_PER_UNKNOWN * (n + 1) if directions is None else directions
    rows, rhs = [], []
    for u in spiral_directions(n, count):
        rows.append((n + 1) * np.concatenate([[m.value(x, u)], u]))
        rhs.append(s_curvature(m, TangentPoint(x, u)))
    rows, rhs = np.array(rows), np.array(rhs)
    solution, _, rank, _ = np.linalg.lstsq(rows, rhs, rcond=None)
    if rank < n + 1:
        raise DetectionError(f"The S-curvature fit is rank deficient! Rank {rank} for {n + 1} unknowns.")
    residual = float(np.max(np.abs(rows @ solution - rhs)) / max(float(np.max(np.abs(rhs))), constants.SCALE_FLOOR))
    logger.debug("S-curvature fit at %s: c = %.6g, eta = %s, residual %.3e", x.tolist(), solution[0],
                 solution[1:].tolist(), residual)
    return SCurvatureFit(c=float(solution[0]), eta=solution[1:], residual=residual)


def s_curvature_consistency(m: MetricField, x, c: float, directions: Optional[int] = None) -> float:
    """Worst |S/((n+1)F) - c| over directions at x."""
    n = m.dimension
    x = m.require(x)
    count = constants.DIRECTIONS_PER_UNKNOWN * (n + 1) if directions is None else directions
    worst = 0.0
    for u in spiral_directions(n, count):
        ratio = s_curvature(m, TangentPoint(x, u)) / ((n + 1) * m.value(x, u))
        worst = max(worst, abs(ratio - c))
    return worst
