"""
Identities of metrics of weakly isotropic flag curvature K = 3θ/F + σ,
θ = θ_i(x) y^i.

Pointwise evaluators take (jets, source); existence evaluators take the
TangentJets of all sampled directions at one position and fit the unknown
scalar functions of x by least squares, the residual being the post-fit one.
"""
import logging
from dataclasses import dataclass

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.identities.check import CheckResidual, least_squares_fit, relative_residual
from finslerjet.identities.isotropy_source import IsotropySource
from finslerjet.jet import einsum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CovariantInvariants:
    """θ, σ and their horizontal covariant derivatives at one tangent point (values)."""
    F: float
    Fy: np.ndarray
    y: np.ndarray
    theta_i: np.ndarray
    theta: float
    sigma: float
    theta_d: np.ndarray
    theta_0: float
    theta_dd: np.ndarray
    sigma_d: np.ndarray
    sigma_0: float
    sigma_0d: np.ndarray
    sigma_dd: np.ndarray
    sigma_00: float


def covariant_invariants(jets: TangentJets, source: IsotropySource, depth: int = 2) -> CovariantInvariants:
    """
    θ_{|i}, θ_{|0}, θ_{|i|j}, σ_{|i}, σ_{|0}, σ_{|0|j}, σ_{|i|j}, σ_{|0|0} at the base point of ``jets``.

    Second derivatives are only filled when ``depth`` is 2.
    """
    _, sigma = source.theta_sigma(jets, depth)
    theta_vector = source.theta_vector(jets, depth)
    theta = source.theta_form(jets, depth)
    theta_d = jets.covariant(theta, "")
    sigma_d = jets.covariant(sigma, "")
    theta_0 = jets.contract_y(theta_d)
    sigma_0 = jets.contract_y(sigma_d)
    n = jets.n
    if depth >= 2:
        theta_dd = jets.covariant(theta_d, "l").value
        sigma_dd = jets.covariant(sigma_d, "l").value
        sigma_0d = jets.covariant(sigma_0, "").value
        sigma_00 = float(sigma_0d @ jets.point.y)
    else:
        theta_dd = sigma_dd = np.full((n, n), np.nan)
        sigma_0d = np.full(n, np.nan)
        sigma_00 = float("nan")
    return CovariantInvariants(F=jets.F.value, Fy=jets.Fy.value, y=jets.point.y, theta_i=theta_vector.value,
                               theta=theta.value, sigma=sigma.value, theta_d=theta_d.value, theta_0=theta_0.value,
                               theta_dd=theta_dd, sigma_d=sigma_d.value, sigma_0=sigma_0.value, sigma_0d=sigma_0d,
                               sigma_dd=sigma_dd, sigma_00=sigma_00)


def theta_closed(jets: TangentJets, source: IsotropySource) -> CheckResidual:
    """θ_{i x^j} - θ_{j x^i} = 0."""
    gradient = jets.grad_x(source.theta_vector(jets, 1))
    return relative_residual(gradient - gradient.T, gradient)


def ricci_oneform(jets: TangentJets, source: IsotropySource) -> CheckResidual:
    """
    Ricci identity for θ and its weakly isotropic evaluation:

    θ_{|i|j} - θ_{|j|i} = θ_m R^m_ij = F K (θ_i F_j - θ_j F_i)
    """
    theta_vector = source.theta_vector(jets, 2)
    D = jets.covariant(jets.covariant(source.theta_form(jets, 2), ""), "l")
    commutator = D - D.T
    curvature = einsum("m,mij->ij", theta_vector, jets.R3)
    outer = theta_vector[:, None] * jets.Fy[None, :]
    isotropic = jets.F * jets.K * (outer - outer.T)
    first = relative_residual(commutator - curvature, commutator, curvature)
    second = relative_residual(commutator - isotropic, commutator, isotropic)
    return CheckResidual(residual=max(first.residual, second.residual), scale=max(first.scale, second.scale),
                         details={"ricci_identity": first.residual, "isotropic_form": second.residual})


def f_existence(samples: list[TangentJets], source: IsotropySource) -> CheckResidual:
    """
    There is f = f(x) with

    f F² - σ_{|0}F - θ_{|0} = 0,
    θ_{|i} = f F F_i - ½σ_{|i}F - ½σ_{|0}F_i,
    θ_{|i|j} = f_{|j} F F_i - ½σ_{|i|j}F - ½σ_{|0|j}F_i.

    Unknowns are f and f_{x^j} at the sampled position.
    """
    rows, rhs = [], []
    for jets in samples:
        c = covariant_invariants(jets, source, depth=2)
        n = len(c.y)
        rows.append(np.concatenate([[c.F * c.F], np.zeros(n)]))
        rhs.append(c.sigma_0 * c.F + c.theta_0)
        for i in range(n):
            rows.append(np.concatenate([[c.F * c.Fy[i]], np.zeros(n)]))
            rhs.append(c.theta_d[i] + 0.5 * c.sigma_d[i] * c.F + 0.5 * c.sigma_0 * c.Fy[i])
            for j in range(n):
                row = np.zeros(n + 1)
                row[1 + j] = c.F * c.Fy[i]
                rows.append(row)
                rhs.append(c.theta_dd[i, j] + 0.5 * c.sigma_dd[i, j] * c.F + 0.5 * c.sigma_0d[j] * c.Fy[i])
    solution, residual = least_squares_fit(rows, rhs)
    details = {"f": float(solution[0]), "f_x": solution[1:].tolist()}
    return CheckResidual(residual=residual.residual, scale=residual.scale, details=details)


@dataclass(frozen=True)
class HExistenceFit:
    """h(x) and f_{x^i}(x) of ½σ_{|0|0} = hF² + 2(f_{|0} + σθ)F + 3θ² at one position."""
    x: np.ndarray
    h: float
    f_x: np.ndarray
    theta: np.ndarray
    sigma: float
    residual: CheckResidual


def h_existence_fit(samples: list[TangentJets], source: IsotropySource) -> HExistenceFit:
    rows, rhs = [], []
    theta_i, sigma = None, None
    for jets in samples:
        c = covariant_invariants(jets, source, depth=2)
        theta_i, sigma = c.theta_i, c.sigma
        rows.append(np.concatenate([[c.F * c.F], 2.0 * c.F * c.y]))
        rhs.append(0.5 * c.sigma_00 - 2.0 * c.sigma * c.theta * c.F - 3.0 * c.theta * c.theta)
    solution, residual = least_squares_fit(rows, rhs)
    logger.debug("h-existence fit at %s: h = %.6g, f_x = %s, residual %.3e", samples[0].point.x.tolist(),
                 solution[0], solution[1:].tolist(), residual.residual)
    return HExistenceFit(x=samples[0].point.x, h=float(solution[0]), f_x=solution[1:], theta=np.asarray(theta_i),
                         sigma=float(sigma), residual=residual)


def h_existence(samples: list[TangentJets], source: IsotropySource) -> CheckResidual:
    """There is h = h(x) with ½σ_{|0|0} = hF² + 2(f_{|0} + σθ)F + 3θ²."""
    fit = h_existence_fit(samples, source)
    return CheckResidual(residual=fit.residual.residual, scale=fit.residual.scale,
                         details={"h": fit.h, "f_x": fit.f_x.tolist()})


def lambda_proportionality(samples: list[TangentJets], source: IsotropySource) -> CheckResidual:
    """
    There is λ = λ(x) with θ_i = λσ_{x^i}.

    Positions where σ has a critical point impose no condition.
    """
    jets = samples[0]
    theta, sigma = source.theta_sigma(jets, 1)
    theta = np.array([t.value for t in theta])
    gradient = jets.grad_x(sigma).value
    norm = float(gradient @ gradient)
    if np.sqrt(norm) < constants.THETA_ZERO:
        return CheckResidual(residual=0.0, scale=0.0, details={"lambda": None, "critical_sigma": True})
    lam = float(theta @ gradient) / norm
    residual = relative_residual(theta - lam * gradient, theta, lam * gradient)
    return CheckResidual(residual=residual.residual, scale=residual.scale, details={"lambda": lam})
