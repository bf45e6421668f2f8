"""
Curvature formulas of metrics of scalar flag curvature K = K(x, y), and the
Cartan/Landsberg relations they feed into.

All evaluators take a TangentJets and return a CheckResidual; K is the
trace fit R^m_m / ((n-1)F²).
"""
import numpy as np

from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.identities.check import CheckResidual, place, relative_residual


def scalar_flag_R(jets: TangentJets, source=None) -> CheckResidual:
    """R^i_k = K(F² δ^i_k - F F_k y^i)."""
    R, model = jets.R, jets.R_scalar_flag
    return relative_residual(R - model, R, model)


def scalar_flag_R3_model(jets: TangentJets):
    """
    R^m_ij predicted from K, indexed [m, i, j]:

    ⅓F K_j (F δ^m_i - F_i y^m) - ⅓F K_i (F δ^m_j - F_j y^m) + K F (F_j δ^m_i - F_i δ^m_j)
    """
    n, F, Fy, K = jets.n, jets.F, jets.Fy, jets.K
    Ky = jets.grad_y(K)
    E = F * np.eye(n) - jets.y[:, None] * Fy[None, :]
    T1 = E[:, :, None] * (F * Ky / 3.0)[None, None, :]
    T3 = F * K * (place(np.eye(n), "mi", "mij") * place(Fy, "j", "mij")
                  - place(np.eye(n), "mj", "mij") * place(Fy, "i", "mij"))
    return T1 - T1.transpose(0, 2, 1) + T3


def scalar_flag_R3(jets: TangentJets, source=None) -> CheckResidual:
    R3 = jets.R3
    model = scalar_flag_R3_model(jets)
    return relative_residual(R3 - model, R3, model)


def scalar_flag_R4_model(jets: TangentJets):
    """
    hh-curvature R_j^i_kl predicted from K, indexed [j, i, k, l]:

    K(g_jl δ_ik - g_jk δ_il) + ⅓F²(K_jl h^i_k - K_jk h^i_l) + K_j F(F_l δ_ik - F_k δ_il)
    + ⅓K_l(2F F_j δ_ik - F F_k δ_ij - g_jk y^i) - ⅓K_k(2F F_j δ_il - F F_l δ_ij - g_jl y^i)
    """
    n, F, Fy, K, g = jets.n, jets.F, jets.Fy, jets.K, jets.g
    Ky = jets.grad_y(K)
    Kyy = jets.grad_y(Ky)
    eye = np.eye(n)
    t = "jikl"

    def delta(axes):
        return place(eye, axes, t)

    curvature = K * (place(g, "jl", t) * delta("ik") - place(g, "jk", t) * delta("il"))
    hessian = (F * F / 3.0) * (place(Kyy, "jl", t) * place(jets.h_mixed, "ik", t)
                               - place(Kyy, "jk", t) * place(jets.h_mixed, "il", t))
    gradient = F * place(Ky, "j", t) * (place(Fy, "l", t) * delta("ik") - place(Fy, "k", t) * delta("il"))

    def bracket(a):
        return (2.0 * F * place(Fy, "j", t) * delta("i" + a)
                - F * place(Fy, a, t) * delta("ij")
                - place(g, "j" + a, t) * place(jets.y, "i", t))

    mixed = (place(Ky, "l", t) * bracket("k") - place(Ky, "k", t) * bracket("l")) / 3.0
    return curvature + hessian + gradient + mixed


def scalar_flag_R4(jets: TangentJets, source=None) -> CheckResidual:
    R4 = jets.R4
    model = scalar_flag_R4_model(jets)
    return relative_residual(R4 - model, R4, model)


def scalar_flag_trace(jets: TangentJets, source=None) -> CheckResidual:
    """R_m^m_ij = ⅓(n+1) F (K_i F_j - K_j F_i)."""
    trace = jets.R4.trace(0, 1)
    Ky, Fy = jets.grad_y(jets.K), jets.Fy
    outer = Ky[:, None] * Fy[None, :]
    model = ((jets.n + 1) / 3.0) * jets.F * (outer - outer.T)
    return relative_residual(trace - model, trace, model)


def lemma31_Kijk(jets: TangentJets, source=None) -> CheckResidual:
    """
    Cyclic relation of the covariant derivatives of K_k:

    A_ij F_k - A_ik F_j + A_jk F_i = 0 with A_ij = K_{j|i} - K_{i|j}.
    """
    D = jets.covariant(jets.grad_y(jets.K), "l")
    A = D.T - D
    Fy = jets.Fy
    t = "ijk"
    total = (place(A, "ij", t) * place(Fy, "k", t)
             - place(A, "ik", t) * place(Fy, "j", t)
             + place(A, "jk", t) * place(Fy, "i", t))
    return relative_residual(total, A * jets.F)


def lemma32_Kk(jets: TangentJets, source=None) -> CheckResidual:
    """
    Two equivalent expressions of K_{|k} for n ≥ 3:

    form 1: F K_{|k} - F_k K_{|0} - ⅓F K_{·k|0} = 0
    form 2: (K_{|0}/F)_{·k} - (4/3) K_{·k|0}/F = 0

    Both are evaluated; the residual is the larger one and a disagreement
    between the two verdicts is recorded in the details.
    """
    F, Fy, K = jets.F, jets.Fy, jets.K
    DK = jets.covariant(K, "")
    DK0 = jets.contract_y(DK)
    DKy0 = jets.covariant0(jets.grad_y(K), "l")
    form1 = F * DK - Fy * DK0 - (F / 3.0) * DKy0
    first = relative_residual(form1, F * DK, Fy * DK0, F * DKy0)
    scaled = DK0 / F
    form2 = jets.grad_y(scaled) - (4.0 / 3.0) * DKy0 / F
    second = relative_residual(form2, jets.grad_y(scaled), DKy0 / F)
    details = {"form1_residual": first.residual, "form2_residual": second.residual}
    return CheckResidual(residual=max(first.residual, second.residual),
                         scale=max(first.scale, second.scale), details=details)


def jk0_formula(jets: TangentJets, source=None) -> CheckResidual:
    """J_{k|0} = -⅓F²((n+1)K_{·k} + 3K I_k)."""
    DJ0 = jets.covariant0(jets.J, "l")
    model = -(jets.F2 / 3.0) * ((jets.n + 1) * jets.grad_y(jets.K) + 3.0 * jets.K * jets.I)
    return relative_residual(DJ0 - model, DJ0, model)


def cl_relation(jets: TangentJets, source=None) -> CheckResidual:
    """C_{ijk|0} = L_ijk and J_k = I_{k|0}."""
    DC0 = jets.covariant0(jets.C, "lll")
    first = relative_residual(DC0 - jets.L, DC0, jets.L)
    DI0 = jets.covariant0(jets.I, "l")
    second = relative_residual(DI0 - jets.J, DI0, jets.J)
    return CheckResidual(residual=max(first.residual, second.residual), scale=max(first.scale, second.scale),
                         details={"cartan_landsberg": first.residual, "mean": second.residual})


def lemma32_summary(details: list, tolerance: float) -> dict:
    """Worst residual of each form and whether the two forms reach different verdicts."""
    form1 = max((d["form1_residual"] for d in details), default=0.0)
    form2 = max((d["form2_residual"] for d in details), default=0.0)
    return {"form1_max_residual": form1, "form2_max_residual": form2,
            "forms_disagree": (form1 < tolerance) != (form2 < tolerance)}
