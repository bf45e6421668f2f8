import itertools
import logging
from dataclasses import dataclass, replace

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import SpecError
from finslerjet.general_utils.metric_families import MetricFamily
from finslerjet.families.spec import MetricFamilySpec
from finslerjet.geometry.metric_field import MetricField
from finslerjet.jet import sqrt, exp

logger = logging.getLogger(__name__)


def euclidean_dot(u, v):
    total = 0.0
    for a, b in zip(u, v):
        total = total + a * b
    return total


@dataclass(frozen=True)
class NavigationData:
    """Parameters of the navigation family: space form curvature mu and the vector field data."""
    delta: float
    mu: float
    Q: np.ndarray
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def from_spec(cls, spec: MetricFamilySpec) -> "NavigationData":
        n = spec.dimension
        zeros = np.zeros(n)
        if spec.family == MetricFamily.CMS_FAMILY:
            return cls(float(spec.params["delta"]), float(spec.params["mu"]), spec.param("Q"), spec.param("a"),
                       spec.param("b"))
        if spec.family == MetricFamily.SPACE_FORM:
            return cls(0.0, float(spec.params["mu"]), np.zeros((n, n)), zeros, zeros)
        if spec.family == MetricFamily.EUCLIDEAN:
            return cls(0.0, 0.0, np.zeros((n, n)), zeros, zeros)
        raise SpecError(f"The family {spec.family.value} is not a member of the navigation family!")

    def conformal(self, X):
        """1 + mu|x|²."""
        return 1.0 + self.mu * euclidean_dot(X, X)

    def vector_field(self, X) -> list:
        """
        W = -2[(δ√(1+μ|x|²) + ⟨a,x⟩)x - a|x|²/(√(1+μ|x|²) + 1)] + xQ + b + μ⟨b,x⟩x
        """
        n = len(X)
        xx = euclidean_dot(X, X)
        s = sqrt(self.conformal(X))
        scale = self.delta * s + euclidean_dot(self.a, X)
        bx = euclidean_dot(self.b, X)
        field = []
        for i in range(n):
            rotation = euclidean_dot(X, self.Q[:, i])
            field.append(-2.0 * (scale * X[i] - self.a[i] * xx / (s + 1.0)) + rotation + self.b[i]
                         + self.mu * bx * X[i])
        return field

    def h_inner(self, X, u, v):
        """Inner product of the space form metric a_ij = ((1+μ|x|²)δ_ij - μx_ix_j)/(1+μ|x|²)²."""
        conformal = self.conformal(X)
        return (conformal * euclidean_dot(u, v) - self.mu * euclidean_dot(X, u) * euclidean_dot(X, v)) / (conformal * conformal)

    def W_norm_squared(self, X):
        W = self.vector_field(X)
        return self.h_inner(X, W, W)

    def evaluate(self, X, Y):
        W = self.vector_field(X)
        lam = 1.0 - self.h_inner(X, W, W)
        w0 = self.h_inner(X, W, Y)
        h2 = self.h_inner(X, Y, Y)
        return (sqrt(lam * h2 + w0 * w0) - w0) / lam

    def in_domain(self, x) -> bool:
        x = list(np.asarray(x, dtype=float))
        if self.conformal(x) <= 0:
            return False
        return bool(self.W_norm_squared(x) < 1.0)


def probe_lattice(n: int, points: int = constants.PROBE_GRID_POINTS,
                  half_width: float = constants.PROBE_GRID_HALF_WIDTH) -> np.ndarray:
    axis = np.linspace(-half_width, half_width, points)
    return np.array(list(itertools.product(axis, repeat=n)))


def _validate_navigation(data: NavigationData, n: int):
    for x in probe_lattice(n):
        if data.conformal(list(x)) <= 0:
            continue
        norm = float(np.sqrt(data.W_norm_squared(list(x))))
        if norm >= 1.0:
            raise SpecError(f"The navigation field is too strong! ‖W‖_h = {norm:.6g} ≥ 1 at probe point"
                            f" x = {x.tolist()}.")


@dataclass(frozen=True)
class RandersData:
    alpha: np.ndarray
    b: np.ndarray
    twist: float

    def beta_coefficients(self, X) -> list:
        coefficients = list(self.b)
        if self.twist:
            bump = self.twist * exp(-euclidean_dot(X, X))
            coefficients[0] = coefficients[0] + bump * X[1]
            coefficients[1] = coefficients[1] - bump * X[0]
        return coefficients

    def beta_norm(self, x) -> float:
        b = np.array([float(c) for c in self.beta_coefficients(list(np.asarray(x, dtype=float)))])
        return float(np.sqrt(b @ np.linalg.solve(self.alpha, b)))

    def evaluate(self, X, Y):
        n = len(Y)
        alpha_sq = 0.0
        for i in range(n):
            alpha_sq = alpha_sq + self.alpha[i, i] * Y[i] * Y[i]
            for j in range(i + 1, n):
                alpha_sq = alpha_sq + 2.0 * self.alpha[i, j] * Y[i] * Y[j]
        return sqrt(alpha_sq) + euclidean_dot(self.beta_coefficients(X), Y)


def _validate_randers(data: RandersData, n: int):
    for x in probe_lattice(n):
        norm = data.beta_norm(x)
        if norm >= 1.0:
            raise SpecError(f"The Randers 1-form is too strong! ‖β‖_α = {norm:.6g} ≥ 1 at probe point"
                            f" x = {x.tolist()}.")


def euclidean_metric(n: int) -> MetricField:
    return MetricField(dimension=n, evaluate=lambda X, Y: sqrt(euclidean_dot(Y, Y)), domain_check=lambda x: True,
                       name=f"euclidean(n={n})")


def funk_metric(n: int) -> MetricField:
    """Funk metric of the open unit ball."""
    if n < 2:
        raise SpecError(f"The Funk metric needs n ≥ 2! Got n = {n}.")

    def evaluate(X, Y):
        xx = euclidean_dot(X, X)
        yy = euclidean_dot(Y, Y)
        xy = euclidean_dot(X, Y)
        return (sqrt(yy - (xx * yy - xy * xy)) + xy) / (1.0 - xx)

    return MetricField(dimension=n, evaluate=evaluate, domain_check=lambda x: float(np.dot(x, x)) < 1.0,
                       name=f"funk(n={n})")


def _riemannian_metric(spec: MetricFamilySpec) -> MetricField:
    k = spec.param("k")

    def evaluate(X, Y):
        graph = euclidean_dot([k[i] * X[i] for i in range(len(X))], Y)
        return sqrt(euclidean_dot(Y, Y) + graph * graph)

    return MetricField(dimension=spec.dimension, evaluate=evaluate, domain_check=lambda x: True,
                       name=f"riemannian(n={spec.dimension})", spec=spec)


def _quartic_metric(spec: MetricFamilySpec) -> MetricField:
    epsilon = float(spec.params["epsilon"])

    def evaluate(X, Y):
        quartic = 0.0
        for y in Y:
            quartic = quartic + y ** 4
        return sqrt(sqrt(quartic) + epsilon * euclidean_dot(Y, Y))

    return MetricField(dimension=spec.dimension, evaluate=evaluate, domain_check=lambda x: True,
                       name=f"quartic(n={spec.dimension})", spec=spec)


def _space_form_metric(spec: MetricFamilySpec) -> MetricField:
    data = NavigationData.from_spec(spec)
    return MetricField(dimension=spec.dimension, evaluate=lambda X, Y: sqrt(data.h_inner(X, Y, Y)),
                       domain_check=lambda x: data.conformal(list(np.asarray(x, dtype=float))) > 0,
                       name=f"space_form(n={spec.dimension}, mu={data.mu:g})", spec=spec)


def _cms_metric(spec: MetricFamilySpec) -> MetricField:
    data = NavigationData.from_spec(spec)
    _validate_navigation(data, spec.dimension)
    return MetricField(dimension=spec.dimension, evaluate=data.evaluate, domain_check=data.in_domain,
                       name=f"cms_family(n={spec.dimension})", spec=spec)


def _randers_metric(spec: MetricFamilySpec) -> MetricField:
    data = RandersData(spec.param("alpha"), spec.param("b"), float(spec.params["twist"]))
    _validate_randers(data, spec.dimension)
    return MetricField(dimension=spec.dimension, evaluate=data.evaluate,
                       domain_check=lambda x: data.beta_norm(x) < 1.0,
                       name=f"randers(n={spec.dimension})", spec=spec)


def construct(spec: MetricFamilySpec) -> MetricField:
    """
    Builds the MetricField of a validated family spec.

    Parameters:
    - spec: the parsed MetricFamilySpec

    Returns:
    - a MetricField whose evaluator accepts floats, numpy arrays and jets alike
    """
    family = spec.family
    if family == MetricFamily.EUCLIDEAN:
        metric = replace(euclidean_metric(spec.dimension), spec=spec)
    elif family == MetricFamily.FUNK:
        metric = replace(funk_metric(spec.dimension), spec=spec)
    elif family == MetricFamily.RIEMANNIAN:
        metric = _riemannian_metric(spec)
    elif family == MetricFamily.QUARTIC:
        metric = _quartic_metric(spec)
    elif family == MetricFamily.SPACE_FORM:
        metric = _space_form_metric(spec)
    elif family == MetricFamily.CMS_FAMILY:
        metric = _cms_metric(spec)
    elif family == MetricFamily.RANDERS:
        metric = _randers_metric(spec)
    else:
        raise SpecError(f"Unsupported metric family {family}!")
    logger.debug("constructed %s", metric.name)
    return metric
