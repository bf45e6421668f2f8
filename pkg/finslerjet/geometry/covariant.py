import logging
from typing import Callable, Optional, Union

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import JetError
from finslerjet.general_utils.sampling import TangentPoint
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.jet import JetValue

logger = logging.getLogger(__name__)

TensorField = Callable[[TangentJets], JetValue]


def horizontal_derivative(q: TensorField, m: MetricField, p: TangentPoint, k: Optional[Union[int, str]] = None,
                          signature: str = "", order: Optional[int] = None) -> Union[float, np.ndarray]:
    """
    Horizontal covariant derivative of a field on the tangent bundle.

    Parameters:
    - q: builds the field as a jet from the TangentJets of the point (e.g. ``lambda t: t.F``)
    - k: derivative index; None returns all of them on a trailing axis, "0" contracts with y
    - signature: 'u'/'l' per tensor index of q
    - order: jet order of F, by default enough for q's derivative depth plus the connection

    Returns:
    - the value of q_{|k}
    """
    order = constants.REQUIRED_ORDER["christoffel"] + 1 if order is None else order
    jets = TangentJets(m, p, order)
    try:
        tensor = q(jets)
        if k == "0":
            derivative = jets.covariant0(tensor, signature)
        else:
            derivative = jets.covariant(tensor, signature)
    except JetError as e:
        raise JetError(f"Insufficient jet order {order} for the requested horizontal derivative! {e}") from e
    value = np.asarray(derivative.value)
    if k is None or isinstance(k, str):
        return value if value.ndim else float(value)
    result = value[..., k]
    return result if np.ndim(result) else float(result)
