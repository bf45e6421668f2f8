from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.geometry.curvature import (
    CurvatureBundle,
    fundamental_tensor,
    spray,
    riemann_curvature,
    flag_curvature,
    scalar_flag_fit,
    cartan,
    berwald_landsberg,
    hh_curvature,
    curvature_bundle,
    homogeneity_report,
)
from finslerjet.geometry.covariant import horizontal_derivative
from finslerjet.geometry.volume import (
    bh_volume_density,
    s_curvature,
    s_curvature_jet,
    almost_isotropic_s_fit,
    s_curvature_consistency,
    sphere_rule,
)
from finslerjet.geometry.projective import hamel_residual, projective
