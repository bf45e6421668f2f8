import logging
from dataclasses import dataclass

import numpy as np

from finslerjet.families.constructors import NavigationData, euclidean_dot
from finslerjet.families.spec import MetricFamilySpec
from finslerjet.jet import sqrt

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PredictedInvariants:
    """
    Closed-form invariants of the navigation family.

    With c = (δ + ⟨a,x⟩)/√(1+μ|x|²) the flag curvature is K = 3θ/F + σ where
    θ = c_{x^m} y^m and σ = μ - c² - 2c_{x^m}W^m; the S-curvature is (n+1)cF.
    Every method takes the position components as a list of floats or jets.
    """
    data: NavigationData
    dimension: int

    def c(self, X):
        return (self.data.delta + euclidean_dot(self.data.a, X)) / sqrt(self.data.conformal(X))

    def c_gradient(self, X) -> list:
        s = sqrt(self.data.conformal(X))
        numerator = self.data.delta + euclidean_dot(self.data.a, X)
        return [self.data.a[i] / s - numerator * self.data.mu * X[i] / (s * s * s) for i in range(len(X))]

    def theta(self, X) -> list:
        """Coefficients θ_i of the 1-form θ."""
        return self.c_gradient(X)

    def sigma(self, X):
        c = self.c(X)
        return self.data.mu - c * c - 2.0 * euclidean_dot(self.c_gradient(X), self.data.vector_field(X))

    def s_coefficient(self, X):
        return (self.dimension + 1) * self.c(X)

    def flag_curvature(self, x, y, F: float) -> float:
        X = list(np.asarray(x, dtype=float))
        return float(3.0 * euclidean_dot(self.theta(X), y) / F + self.sigma(X))

    def at(self, x) -> dict:
        X = list(np.asarray(x, dtype=float))
        return {
            "c": float(self.c(X)),
            "theta": [float(t) for t in self.theta(X)],
            "sigma": float(self.sigma(X)),
            "s_coefficient": float(self.s_coefficient(X)),
        }


def predicted_invariants(spec: MetricFamilySpec) -> PredictedInvariants:
    """Available for cms_family and its members space_form and euclidean; SpecError otherwise."""
    return PredictedInvariants(NavigationData.from_spec(spec), spec.dimension)
