import logging

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.sampling import TangentPoint
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets

logger = logging.getLogger(__name__)


def hamel_residual(m: MetricField, p: TangentPoint) -> np.ndarray:
    """Entry (l, k) is ∂²F/∂x^l∂y^k - ∂²F/∂x^k∂y^l; it vanishes iff F is locally projectively flat."""
    return TangentJets(m, p, constants.REQUIRED_ORDER["hamel"]).hamel.value


def projective(m: MetricField, p: TangentPoint) -> tuple[float, float]:
    """
    Projective factor P and the flag curvature K = (P² - P_{x^m} y^m)/F² it
    implies when F is projectively flat.
    """
    jets = TangentJets(m, p, constants.REQUIRED_ORDER["projective"])
    hamel = float(np.max(np.abs(jets.hamel.value)))
    if hamel > constants.PROJECTIVE_TOLERANCE:
        logger.warning("%s is not projectively flat at x = %s (Hamel residual %.3e); K_proj is meaningless there",
                       m.name, p.x.tolist(), hamel)
    return jets.P.value, jets.K_projective.value
