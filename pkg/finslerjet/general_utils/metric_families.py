from enum import Enum


class MetricFamily(Enum):
    EUCLIDEAN = "euclidean"
    RIEMANNIAN = "riemannian"
    SPACE_FORM = "space_form"
    RANDERS = "randers"
    CMS_FAMILY = "cms_family"
    FUNK = "funk"
    QUARTIC = "quartic"


FAMILY_DEFAULTS = {
    MetricFamily.EUCLIDEAN.value: {},
    MetricFamily.RIEMANNIAN.value: {"k": None},
    MetricFamily.SPACE_FORM.value: {"mu": 1.0},
    MetricFamily.RANDERS.value: {"alpha": None, "b": None, "twist": 0.0},
    MetricFamily.CMS_FAMILY.value: {"delta": 0.0, "mu": 0.0, "Q": None, "a": None, "b": None},
    MetricFamily.FUNK.value: {},
    MetricFamily.QUARTIC.value: {"epsilon": 0.1},
}

FAMILY_HELP = {
    MetricFamily.EUCLIDEAN.value: "The flat norm F = |y|.",
    MetricFamily.RIEMANNIAN.value: "Graph metric of the quadric ½Σk_i(x^i)²: F² = |y|² + (Σk_i x^i y^i)². Distinct k_i"
                                   " give anisotropic sectional curvature. Defaults to k = (0.5, 1.0, 1.5, 2.0).",
    MetricFamily.SPACE_FORM.value: "The Riemannian metric of constant curvature mu in projective coordinates.",
    MetricFamily.RANDERS.value: "F = √(yᵀAy) + b·y + twist·(x²y¹ − x¹y²)·exp(−|x|²) with a constant SPD matrix A"
                                " ('alpha'). A nonzero twist makes β non-closed.",
    MetricFamily.CMS_FAMILY.value: "Navigation Randers metrics of weakly isotropic flag curvature built from the space"
                                   " form h of curvature mu and the vector field W(delta, mu, Q, a, b).",
    MetricFamily.FUNK.value: "The Funk metric of the unit ball, projectively flat with flag curvature −1/4.",
    MetricFamily.QUARTIC.value: "Minkowski norm F = (√Σ(y^i)⁴ + epsilon|y|²)^{1/2}; reversible and not of Randers type.",
}
