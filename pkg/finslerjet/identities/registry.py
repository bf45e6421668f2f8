from typing import Iterable, Union

from finslerjet.general_utils.app_utils import Applicability, CheckKind
from finslerjet.general_utils.errors import SpecError
from finslerjet.identities import bianchi, isotropic, projective_checks, scalar_flag
from finslerjet.identities.check import IdentityCheck

ANY = Applicability.ANY_METRIC
SCALAR_FLAG = Applicability.SCALAR_FLAG_ONLY
WEAKLY_ISOTROPIC = Applicability.WEAKLY_ISOTROPIC_ONLY
PROJECTIVELY_FLAT = Applicability.PROJECTIVELY_FLAT_ONLY
POINTWISE = CheckKind.POINTWISE
EXISTENCE = CheckKind.EXISTENCE

_CHECKS = [
    IdentityCheck("bianchi_from_berwald", "R_i^l_mk·j = B^l_ijk|m - B^l_ijm|k", ANY, POINTWISE, 7,
                  bianchi.bianchi_from_berwald),
    IdentityCheck("bianchi_cyclic", "R_m^l_ij|k + R_m^l_jk|i + R_m^l_ki|j = 0", ANY, POINTWISE, 7,
                  bianchi.bianchi_cyclic),
    IdentityCheck("bianchi_contracted", "R^l_i|k - R^l_k|i + R^l_ki|0 = 0", ANY, POINTWISE, 6,
                  bianchi.bianchi_contracted),
    IdentityCheck("bianchi_trace_lm", "cyclic Bianchi identity traced over l = m", ANY, POINTWISE, 7,
                  bianchi.bianchi_trace_lm),
    IdentityCheck("bianchi_trace_li", "R^m_m|k - R^m_k|m + R^m_km|0 = 0", ANY, POINTWISE, 6,
                  bianchi.bianchi_trace_li),
    IdentityCheck("scalar_flag_R", "R^i_k = K F² h^i_k", ANY, POINTWISE, 4, scalar_flag.scalar_flag_R),
    IdentityCheck("scalar_flag_R3", "R^m_ij in terms of K and K_·k", SCALAR_FLAG, POINTWISE, 5,
                  scalar_flag.scalar_flag_R3),
    IdentityCheck("scalar_flag_R4", "R_j^i_kl in terms of K, K_·k and K_·k·l", SCALAR_FLAG, POINTWISE, 6,
                  scalar_flag.scalar_flag_R4),
    IdentityCheck("scalar_flag_trace", "R_m^m_ij = ⅓(n+1)F(K_·i F_·j - K_·j F_·i)", SCALAR_FLAG, POINTWISE, 6,
                  scalar_flag.scalar_flag_trace),
    IdentityCheck("lemma31_Kijk", "cyclic relation of K_·i|j contracted with F_·k", SCALAR_FLAG, POINTWISE, 6,
                  scalar_flag.lemma31_Kijk),
    IdentityCheck("lemma32_Kk", "F K_|k - F_·k K_|0 - ⅓F K_·k|0 = 0, both forms", SCALAR_FLAG, POINTWISE, 6,
                  scalar_flag.lemma32_Kk, min_dimension=3, summarize=scalar_flag.lemma32_summary),
    IdentityCheck("theta_closed", "θ is a closed 1-form", WEAKLY_ISOTROPIC, POINTWISE, 1,
                  isotropic.theta_closed, source_depth=1, min_dimension=3),
    IdentityCheck("f_existence", "f F² - σ_|0 F - θ_|0 = 0 for some f = f(x)", WEAKLY_ISOTROPIC, EXISTENCE, 5,
                  isotropic.f_existence, source_depth=2, min_dimension=3, skip_on_vanishing_theta=True),
    IdentityCheck("h_existence", "½σ_|0|0 = hF² + 2(f_|0 + σθ)F + 3θ² for some h = h(x)", WEAKLY_ISOTROPIC,
                  EXISTENCE, 5, isotropic.h_existence, source_depth=2, min_dimension=3),
    IdentityCheck("lambda_proportionality", "θ = λσ_|0 for some λ = λ(x)", WEAKLY_ISOTROPIC, EXISTENCE, 1,
                  isotropic.lambda_proportionality, source_depth=1, min_dimension=3, skip_on_vanishing_theta=True),
    IdentityCheck("ricci_oneform", "θ_|i|j - θ_|j|i = θ_m R^m_ij = FK(θ_i F_·j - θ_j F_·i)", WEAKLY_ISOTROPIC,
                  POINTWISE, 5, isotropic.ricci_oneform, source_depth=2, min_dimension=3),
    IdentityCheck("CL_relation", "C_ijk|0 = L_ijk and J_k = I_k|0", ANY, POINTWISE, 5, scalar_flag.cl_relation),
    IdentityCheck("Jk0_formula", "J_k|0 = -⅓F²((n+1)K_·k + 3K I_k)", SCALAR_FLAG, POINTWISE, 6,
                  scalar_flag.jk0_formula),
    IdentityCheck("hamel", "F_x^k·l = F_x^l·k", ANY, POINTWISE, 2, projective_checks.hamel),
    IdentityCheck("berwald_PF", "F_x^k = (P F)_·k", ANY, POINTWISE, 2, projective_checks.berwald_PF),
    IdentityCheck("berwald_PK", "P_x^k = P P_·k - (K F³)_·k / (3F)", PROJECTIVELY_FLAT, POINTWISE, 3,
                  projective_checks.berwald_PK),
    IdentityCheck("proj_K_identity", "projective flag curvature identity in K, P and F", PROJECTIVELY_FLAT,
                  POINTWISE, 4, projective_checks.proj_K_identity),
    IdentityCheck("proj_a_existence", "a F² - σ_x^l y^l F + 2θP - θ_x^l y^l = 0 for some a = a(x)",
                  PROJECTIVELY_FLAT, EXISTENCE, 2, projective_checks.proj_a_existence, source_depth=1),
    IdentityCheck("proj_b_existence", "½σ_x^k x^l y^k y^l - σ_x^l y^l P = bF² + 2(a_x^l y^l + σθ)F + 3θ²",
                  PROJECTIVELY_FLAT, EXISTENCE, 2, projective_checks.proj_b_existence, source_depth=2),
]

REGISTRY = {check.name: check for check in _CHECKS}


def registry() -> list[IdentityCheck]:
    return list(REGISTRY.values())


def get_check(name: str) -> IdentityCheck:
    if name not in REGISTRY:
        raise SpecError(f"Unknown identity check '{name}'! Available: {', '.join(REGISTRY)}.")
    return REGISTRY[name]


def resolve_checks(selection: Union[str, Iterable[str], None]) -> list[IdentityCheck]:
    """'all' (or None) selects every check; otherwise a comma separated list or an iterable of names."""
    if selection is None or selection == "all":
        return registry()
    if isinstance(selection, str):
        selection = [s.strip() for s in selection.split(",") if s.strip()]
    checks = [get_check(name) for name in selection]
    if not checks:
        raise SpecError("No identity check selected!")
    return checks
