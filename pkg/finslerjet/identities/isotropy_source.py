import logging
import threading
from typing import Optional

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.app_utils import IsotropySourceKind
from finslerjet.general_utils.errors import ApplicabilityError, SpecError
from finslerjet.general_utils.metric_families import MetricFamily
from finslerjet.general_utils.sampling import SampleConfig
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.jet import JetValue
from finslerjet.detect.weak_isotropy import weakly_isotropic_fit, weakly_isotropic_jets

logger = logging.getLogger(__name__)

NAVIGATION_FAMILIES = (MetricFamily.CMS_FAMILY, MetricFamily.SPACE_FORM, MetricFamily.EUCLIDEAN)


class IsotropySource:
    """
    Supplies θ_i(x) and σ(x) of K = 3θ/F + σ as jets, either from the closed
    form of the navigation family or from the jet-valued regression.
    """

    def __init__(self, metric: MetricField, kind: IsotropySourceKind, sampler: Optional[SampleConfig] = None):
        self.metric = metric
        self.kind = kind
        self.sampler = sampler or SampleConfig()
        self._predicted = None
        if kind == IsotropySourceKind.PREDICTED:
            from finslerjet.families.predicted import predicted_invariants
            if metric.spec is None or metric.spec.family not in NAVIGATION_FAMILIES:
                raise SpecError(f"Predicted θ and σ are only available for the navigation family! Got {metric.name}.")
            self._predicted = predicted_invariants(metric.spec)
        self._cache = {}
        self._lock = threading.Lock()

    @classmethod
    def for_metric(cls, metric: MetricField, kind: Optional[IsotropySourceKind] = None,
                   sampler: Optional[SampleConfig] = None) -> "IsotropySource":
        if kind is None:
            navigation = metric.spec is not None and metric.spec.family in NAVIGATION_FAMILIES
            kind = IsotropySourceKind.PREDICTED if navigation else IsotropySourceKind.FITTED
        return cls(metric, kind, sampler)

    def require(self, x) -> None:
        """Raises ApplicabilityError when the metric is not weakly isotropic at x."""
        if self.kind == IsotropySourceKind.PREDICTED:
            return
        key = ("fit", tuple(np.asarray(x, dtype=float).tolist()))
        with self._lock:
            fit = self._cache.get(key)
        if fit is None:
            fit = weakly_isotropic_fit(self.metric, x, self.sampler)
            with self._lock:
                self._cache[key] = fit
        if not fit.is_weakly_isotropic():
            raise ApplicabilityError(f"{self.metric.name} is not of weakly isotropic flag curvature at"
                                     f" x = {fit.x.tolist()}! Fit residual {fit.residual:.3e}.")

    def theta_sigma(self, jets: TangentJets, depth: int) -> tuple[list[JetValue], JetValue]:
        """θ_i and σ as x-only jets compatible with ``jets``, carrying at least ``depth`` x-derivatives."""
        if self.kind == IsotropySourceKind.PREDICTED:
            theta = [_lift(t, jets) for t in self._predicted.theta(jets.X)]
            return theta, _lift(self._predicted.sigma(jets.X), jets)
        key = ("jets", jets.point.x.tobytes(), depth)
        with self._lock:
            cached = self._cache.get(key)
        if cached is None:
            theta, sigma, residual = weakly_isotropic_jets(self.metric, jets.point.x, depth, self.sampler)
            if residual > constants.ISOTROPY_TOLERANCE:
                raise ApplicabilityError(f"{self.metric.name} is not of weakly isotropic flag curvature at"
                                         f" x = {jets.point.x.tolist()}! Jet fit residual {residual:.3e}.")
            cached = (theta, sigma)
            with self._lock:
                self._cache[key] = cached
        return cached

    def theta_form(self, jets: TangentJets, depth: int) -> JetValue:
        """The scalar θ = θ_i y^i on the tangent bundle."""
        theta, _ = self.theta_sigma(jets, depth)
        return _contract(theta, jets.Y)

    def theta_vector(self, jets: TangentJets, depth: int) -> JetValue:
        theta, _ = self.theta_sigma(jets, depth)
        return JetValue.stack(theta)


def _contract(coefficients, Y) -> JetValue:
    total = coefficients[0] * Y[0]
    for c, y in zip(coefficients[1:], Y[1:]):
        total = total + c * y
    return total


def _lift(value, jets: TangentJets) -> JetValue:
    if isinstance(value, JetValue):
        return value
    return JetValue.constant(jets.context, value)
