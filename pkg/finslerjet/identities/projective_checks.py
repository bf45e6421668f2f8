"""Hamel's equations, Berwald's characterization of projective flatness and the projective curvature identities."""
import numpy as np

from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.identities.check import CheckResidual, least_squares_fit, place, relative_residual
from finslerjet.identities.isotropy_source import IsotropySource


def hamel(jets: TangentJets, source=None) -> CheckResidual:
    """F_{x^k y^l} y^k = F_{x^l}, in the antisymmetric form F_{x^k y^l} - F_{x^l y^k} = 0."""
    mixed = jets.grad_y(jets.Fx)
    return relative_residual(jets.hamel, mixed)


def berwald_PF(jets: TangentJets, source=None) -> CheckResidual:
    """F_{x^k} = (P F)_{y^k}."""
    lifted = jets.grad_y(jets.P * jets.F)
    return relative_residual(jets.Fx - lifted, jets.Fx, lifted)


def berwald_PK(jets: TangentJets, source=None) -> CheckResidual:
    """P_{x^k} = P P_{y^k} - (K F³)_{y^k} / (3F)."""
    P, F = jets.P, jets.F
    Px = jets.grad_x(P)
    model = P * jets.grad_y(P) - jets.grad_y(jets.K_projective * F * F * F) / (3.0 * F)
    return relative_residual(Px - model, Px, model)


def proj_K_identity(jets: TangentJets, source=None) -> CheckResidual:
    """
    For K the projective flag curvature, with indices [k, l]:

    ⅓F(K_l P_k - K_k P_l) + P(K_l F_k - K_k F_l) + K_{x^k}F_l - K_{x^l}F_k + ⅓F(K_{l x^k} - K_{k x^l}) = 0
    """
    F, P, Fy = jets.F, jets.P, jets.Fy
    K = jets.K_projective
    Ky, Py, Kx = jets.grad_y(K), jets.grad_y(P), jets.grad_x(K)
    Kyx = jets.grad_x(Ky)

    def antisym(a, b):
        outer = place(a, "l", "kl") * place(b, "k", "kl")
        return outer - outer.T

    terms = [(F / 3.0) * antisym(Ky, Py), P * antisym(Ky, Fy), -antisym(Kx, Fy), (F / 3.0) * (Kyx.T - Kyx)]
    total = terms[0] + terms[1] + terms[2] + terms[3]
    return relative_residual(total, *terms)


def proj_a_existence(samples: list[TangentJets], source: IsotropySource) -> CheckResidual:
    """There is a = a(x) with a F² = σ_{x^l}y^l F - 2θP + θ_{x^l}y^l."""
    rows, rhs = [], []
    for jets in samples:
        theta = source.theta_form(jets, 1)
        _, sigma = source.theta_sigma(jets, 1)
        F, y = jets.F.value, jets.point.y
        sigma_0 = float(jets.grad_x(sigma).value @ y)
        theta_0 = float(jets.grad_x(theta).value @ y)
        rows.append([F * F])
        rhs.append(sigma_0 * F - 2.0 * theta.value * jets.P.value + theta_0)
    solution, residual = least_squares_fit(rows, rhs)
    return CheckResidual(residual=residual.residual, scale=residual.scale, details={"a": float(solution[0])})


def proj_b_existence(samples: list[TangentJets], source: IsotropySource) -> CheckResidual:
    """
    There is b = b(x), with a(x) from the a-equation, such that

    ½σ_{x^k x^l}y^k y^l - σ_{x^l}y^l P = bF² + 2(a_{x^l}y^l + σθ)F + 3θ².

    Unknowns are b and a_{x^l}.
    """
    rows, rhs = [], []
    for jets in samples:
        theta = source.theta_form(jets, 2)
        _, sigma = source.theta_sigma(jets, 2)
        F, y = jets.F.value, jets.point.y
        sigma_x = jets.grad_x(sigma)
        hessian = jets.grad_x(sigma_x).value
        quadratic = 0.5 * float(y @ hessian @ y)
        th, sg = theta.value, sigma.value
        rows.append(np.concatenate([[F * F], 2.0 * F * y]))
        rhs.append(quadratic - float(sigma_x.value @ y) * jets.P.value - 2.0 * sg * th * F - 3.0 * th * th)
    solution, residual = least_squares_fit(rows, rhs)
    return CheckResidual(residual=residual.residual, scale=residual.scale,
                         details={"b": float(solution[0]), "a_x": solution[1:].tolist()})
