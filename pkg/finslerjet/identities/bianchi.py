"""Bianchi identities of the hh-curvature of the Berwald connection; they hold for every Finsler metric."""
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.identities.check import CheckResidual, relative_residual


def bianchi_from_berwald(jets: TangentJets, source=None) -> CheckResidual:
    """R_i^l_mk·j = B^l_ijk|m - B^l_ijm|k, residual indexed [l, i, j, k, m]."""
    dR4 = jets.grad_y(jets.R4)
    D = jets.covariant(jets.B, "ulll")
    left = dR4.transpose(1, 0, 4, 3, 2)
    right = D - D.transpose(0, 1, 2, 4, 3)
    return relative_residual(left - right, left, D)


def bianchi_cyclic(jets: TangentJets, source=None) -> CheckResidual:
    """R_m^l_ij|k + R_m^l_jk|i + R_m^l_ki|j = 0."""
    D = jets.covariant(jets.R4, "lull")
    total = D + D.transpose(0, 1, 4, 2, 3) + D.transpose(0, 1, 3, 4, 2)
    return relative_residual(total, D)


def bianchi_contracted(jets: TangentJets, source=None) -> CheckResidual:
    """R^l_i|k - R^l_k|i + R^l_ki|0 = 0."""
    DR = jets.covariant(jets.R, "ul")
    DR3 = jets.covariant0(jets.R3, "ull")
    total = DR - DR.transpose(0, 2, 1) + DR3.transpose(0, 2, 1)
    return relative_residual(total, DR, DR3)


def bianchi_trace_lm(jets: TangentJets, source=None) -> CheckResidual:
    """The cyclic identity traced over l = m."""
    trace = jets.R4.trace(0, 1)
    D = jets.covariant(trace, "ll")
    total = D + D.transpose(2, 0, 1) + D.transpose(1, 2, 0)
    return relative_residual(total, D)


def bianchi_trace_li(jets: TangentJets, source=None) -> CheckResidual:
    """The contracted identity traced over l = i: R^m_m|k - R^m_k|m + R^m_km|0 = 0."""
    DR = jets.covariant(jets.R, "ul")
    DR3 = jets.covariant0(jets.R3, "ull")
    first = DR.trace(0, 1)
    second = DR.trace(0, 2)
    third = DR3.trace(0, 2)
    return relative_residual(first - second + third, first, second, third)
