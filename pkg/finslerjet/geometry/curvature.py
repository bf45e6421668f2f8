import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import DomainError
from finslerjet.general_utils.sampling import TangentPoint
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets

logger = logging.getLogger(__name__)

HOMOGENEITY_FACTORS = (0.5, 2.0, 3.0)


def _jets(m: MetricField, p: TangentPoint, quantity: str) -> TangentJets:
    return TangentJets(m, p, constants.REQUIRED_ORDER[quantity])


def fundamental_tensor(m: MetricField, p: TangentPoint) -> tuple[np.ndarray, np.ndarray]:
    jets = _jets(m, p, "g")
    return jets.g.value, jets.g_inv.value


def spray(m: MetricField, p: TangentPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Geodesic coefficients and their y-derivatives.

    Returns:
    - G (n,), N (n, n) with N[i, k] = ∂G^i/∂y^k, Γ (n, n, n) with Γ[i, j, k] = ∂²G^i/∂y^j∂y^k
    """
    jets = _jets(m, p, "christoffel")
    return jets.G.value, jets.N.value, jets.Gamma.value


def riemann_curvature(m: MetricField, p: TangentPoint) -> np.ndarray:
    return _jets(m, p, "riemann").R.value


def flag_curvature(m: MetricField, p: TangentPoint, u) -> float:
    """
    Flag curvature of the flag spanned by y and the transverse edge u.

    Raises DomainError when u is (numerically) parallel to y.
    """
    u = np.asarray(u, dtype=float)
    jets = _jets(m, p, "riemann")
    g = jets.g.value
    R = jets.R.value
    F2 = jets.F2.value
    uu = u @ g @ u
    yu = p.y @ g @ u
    denominator = F2 * uu - yu ** 2
    if denominator < constants.FLAG_DEGENERACY * F2 * uu:
        raise DomainError(f"Degenerate flag! The edge u = {u.tolist()} is parallel to y = {p.y.tolist()}.")
    return float(np.einsum("im,ik,k,m->", g, R, u, u) / denominator)


def scalar_flag_fit(m: MetricField, p: TangentPoint) -> tuple[float, float]:
    """
    Fits R^i_k = K (F²δ^i_k - F F_k y^i) by the trace.

    Returns:
    - K and the max-norm of the remainder
    """
    jets = _jets(m, p, "riemann")
    K = jets.K.value
    residual = float(np.max(np.abs(jets.R.value - jets.R_scalar_flag.value)))
    return K, residual


def cartan(m: MetricField, p: TangentPoint) -> tuple[np.ndarray, np.ndarray]:
    jets = _jets(m, p, "cartan")
    return jets.C.value, jets.I.value


def berwald_landsberg(m: MetricField, p: TangentPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    jets = _jets(m, p, "berwald")
    return jets.B.value, jets.L.value, jets.J.value


def hh_curvature(m: MetricField, p: TangentPoint) -> tuple[np.ndarray, np.ndarray]:
    """
    hh-curvature of the Berwald connection.

    Returns:
    - R4 indexed [m, l, i, j] and R3 = y^m R4 indexed [l, i, j]
    """
    jets = _jets(m, p, "hh")
    return jets.R4.value, jets.R3.value


@dataclass(frozen=True)
class CurvatureBundle:
    F: float
    g: np.ndarray
    g_inv: np.ndarray
    spray: np.ndarray
    connection_N: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    cartan: np.ndarray
    mean_cartan: np.ndarray
    berwald: np.ndarray
    landsberg: np.ndarray
    mean_landsberg: np.ndarray
    angular: np.ndarray
    angular_mixed: np.ndarray
    K: float
    scalar_flag_residual: float
    S: Optional[float] = None

    def as_dict(self) -> dict:
        return {name: (value.tolist() if isinstance(value, np.ndarray) else value)
                for name, value in self.__dict__.items()}


def curvature_bundle(m: MetricField, p: TangentPoint, with_s_curvature: bool = False) -> CurvatureBundle:
    """Every pointwise quantity at p from a single set of jets."""
    jets = _jets(m, p, "berwald")
    S = None
    if with_s_curvature:
        from finslerjet.geometry.volume import s_curvature
        S = s_curvature(m, p)
    R = jets.R.value
    return CurvatureBundle(
        F=jets.F.value,
        g=jets.g.value,
        g_inv=jets.g_inv.value,
        spray=jets.G.value,
        connection_N=jets.N.value,
        christoffel=jets.Gamma.value,
        riemann=R,
        cartan=jets.C.value,
        mean_cartan=jets.I.value,
        berwald=jets.B.value,
        landsberg=jets.L.value,
        mean_landsberg=jets.J.value,
        angular=jets.h.value,
        angular_mixed=jets.h_mixed.value,
        K=jets.K.value,
        scalar_flag_residual=float(np.max(np.abs(R - jets.R_scalar_flag.value))),
        S=S,
    )


def _relative(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), constants.SCALE_FLOOR)
    return float(np.max(np.abs(a - b))) / scale


def homogeneity_report(m: MetricField, p: TangentPoint, factors=HOMOGENEITY_FACTORS) -> dict[str, float]:
    """
    Worst relative deviation from the homogeneity degrees of F, G, R and C and
    from the Euler relations of g.
    """
    base = _jets(m, p, "riemann")
    cartan_base = cartan(m, p)[0]
    report = {"F": 0.0, "G": 0.0, "R": 0.0, "C": 0.0}
    for factor in factors:
        scaled = _jets(m, TangentPoint(p.x, factor * p.y), "riemann")
        report["F"] = max(report["F"], _relative(scaled.F.value, factor * base.F.value))
        report["G"] = max(report["G"], _relative(scaled.G.value, factor ** 2 * base.G.value))
        report["R"] = max(report["R"], _relative(scaled.R.value, factor ** 2 * base.R.value))
        scaled_cartan = cartan(m, TangentPoint(p.x, factor * p.y))[0]
        report["C"] = max(report["C"], _relative(scaled_cartan, cartan_base / factor))
    g = base.g.value
    report["euler_F2"] = _relative(p.y @ g @ p.y, base.F2.value)
    report["euler_Fy"] = _relative(g @ p.y, base.F.value * base.Fy.value)
    logger.debug("homogeneity report at %s: %s", p.key(), report)
    return report
