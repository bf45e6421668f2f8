import numpy as np
import pytest

from finslerjet.families import predicted_invariants
from finslerjet.general_utils.errors import DomainError
from finslerjet.general_utils.sampling import SampleConfig, TangentPoint, sample_tangent_points
from finslerjet.geometry import (TangentJets, almost_isotropic_s_fit, berwald_landsberg, bh_volume_density, cartan,
                                 curvature_bundle, flag_curvature, fundamental_tensor, hamel_residual, hh_curvature,
                                 homogeneity_report, horizontal_derivative, projective, riemann_curvature,
                                 s_curvature, s_curvature_consistency, s_curvature_jet, scalar_flag_fit, spray)

from conftest import make_metric
from oracles import first_derivative, second_derivative, third_derivative

X2 = np.array([0.1, -0.2])
Y2 = np.array([0.6, 0.8])
X3 = np.array([0.1, -0.15, 0.2])
Y3 = np.array([0.3, 0.5, -0.4])


def test_euclidean_fundamental_tensor_is_identity(euclidean2):
    g, g_inv = fundamental_tensor(euclidean2, TangentPoint(X2, [3.0, 4.0]))
    np.testing.assert_allclose(g, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(g_inv, np.eye(2), atol=1e-14)


def test_space_form_is_flat_at_origin(space_form3):
    g, _ = fundamental_tensor(space_form3, TangentPoint(np.zeros(3), Y3))
    np.testing.assert_allclose(g, np.eye(3), atol=1e-14)


def test_randers_fundamental_tensor_matches_finite_differences(simple_randers3):
    y = np.array([1.0, 0.0, 0.0])
    g, g_inv = fundamental_tensor(simple_randers3, TangentPoint(X3, y))

    def half_square(z):
        return 0.5 * simple_randers3.value(X3, z) ** 2

    oracle = np.array([[second_derivative(half_square, y, i, j) for j in range(3)] for i in range(3)])
    np.testing.assert_allclose(g, oracle, atol=1e-8)
    np.testing.assert_allclose(g @ g_inv, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(g, g.T, atol=1e-14)


def test_randers_fundamental_tensor_is_positive_definite():
    m = make_metric("randers", 2, b=[0.5, 0.0])
    jets = TangentJets(m, TangentPoint(X2, Y2), 2)
    assert np.all(np.linalg.eigvalsh(jets.g.value) > 0)


def test_euler_relations(twisted_randers2):
    jets = TangentJets(twisted_randers2, TangentPoint(X2, Y2), 2)
    g, F = jets.g.value, jets.F.value
    assert Y2 @ g @ Y2 == pytest.approx(F * F, rel=1e-12)
    np.testing.assert_allclose(g @ Y2, F * jets.Fy.value, atol=1e-12)


def test_spray_derivatives_match_finite_differences(twisted_randers2):
    G, N, Gamma = spray(twisted_randers2, TangentPoint(X2, Y2))

    def geodesic_coefficients(z):
        return spray(twisted_randers2, TangentPoint(X2, z))[0]

    for k in range(2):
        np.testing.assert_allclose(N[:, k], first_derivative(geodesic_coefficients, Y2, k), atol=1e-8)
    np.testing.assert_allclose(Gamma[:, 0, 1], second_derivative(geodesic_coefficients, Y2, 0, 1), atol=1e-7)
    B, _, _ = berwald_landsberg(twisted_randers2, TangentPoint(X2, Y2))
    np.testing.assert_allclose(B[:, 0, 1, 1], third_derivative(geodesic_coefficients, Y2, 0, 1, 1), atol=1e-5)


def test_spray_is_two_homogeneous(twisted_randers2):
    G = spray(twisted_randers2, TangentPoint(X2, Y2))[0]
    G2 = spray(twisted_randers2, TangentPoint(X2, 2.0 * Y2))[0]
    np.testing.assert_allclose(G2, 4.0 * G, rtol=1e-12, atol=1e-14)


def test_euclidean_curvature_vanishes(euclidean3):
    p = TangentPoint(X3, Y3)
    G, N, Gamma = spray(euclidean3, p)
    assert np.max(np.abs(G)) == 0.0
    assert np.max(np.abs(riemann_curvature(euclidean3, p))) == 0.0
    K, residual = scalar_flag_fit(euclidean3, p)
    assert K == 0.0 and residual == 0.0
    R4, R3 = hh_curvature(euclidean3, p)
    assert np.max(np.abs(R4)) == 0.0 and np.max(np.abs(R3)) == 0.0


def test_riemannian_spray_is_quadratic(riemannian3):
    p = TangentPoint(X3, Y3)
    B, L, J = berwald_landsberg(riemannian3, p)
    C, I = cartan(riemannian3, p)
    for tensor in (B, L, J, C, I):
        assert np.max(np.abs(tensor)) < 1e-9


def test_space_form_riemann_curvature():
    mu = 0.5
    m = make_metric("space_form", 3, mu=mu)
    jets = TangentJets(m, TangentPoint([0.1, 0.0, 0.2], Y3), 4)
    F, Fy, y = jets.F.value, jets.Fy.value, jets.point.y
    model = mu * (F * F * np.eye(3) - F * np.outer(y, Fy))
    np.testing.assert_allclose(jets.R.value, model, atol=1e-7)
    np.testing.assert_allclose(jets.R.value @ y, np.zeros(3), atol=1e-12)


def test_space_form_flag_curvature_is_constant(space_form3):
    rng = np.random.default_rng(0)
    p = TangentPoint(X3, Y3)
    for _ in range(3):
        assert flag_curvature(space_form3, p, rng.standard_normal(3)) == pytest.approx(1.0, abs=1e-7)


def test_flag_curvature_depends_on_the_plane_only(twisted_randers3):
    p = TangentPoint(X3, Y3)
    u = np.array([1.0, -0.5, 0.25])
    K = flag_curvature(twisted_randers3, p, u)
    assert flag_curvature(twisted_randers3, p, u + 2.0 * Y3) == pytest.approx(K, rel=1e-9, abs=1e-10)


def test_degenerate_flag_is_rejected(twisted_randers3):
    with pytest.raises(DomainError):
        flag_curvature(twisted_randers3, TangentPoint(X3, Y3), 3.0 * Y3)


def test_graph_metric_has_sectional_curvature_k_i_k_j(riemannian3):
    p = TangentPoint(np.zeros(3), [1.0, 0.0, 0.0])
    assert flag_curvature(riemannian3, p, [0.0, 1.0, 0.0]) == pytest.approx(0.5, abs=1e-8)
    assert flag_curvature(riemannian3, p, [0.0, 0.0, 1.0]) == pytest.approx(0.75, abs=1e-8)
    K, residual = scalar_flag_fit(riemannian3, p)
    assert K == pytest.approx(0.625, abs=1e-8)
    assert residual > 1e-3


def test_delta_navigation_metric_has_constant_curvature(cms_delta):
    for p in sample_tangent_points(cms_delta, SampleConfig(num_points=5)):
        K, residual = scalar_flag_fit(cms_delta, p)
        assert K == pytest.approx(-0.01, abs=1e-6)
        assert residual < 1e-6


@pytest.mark.parametrize("params", [
    {"a": [0.1, 0.0, 0.0]},
    {"a": [0.1, 0.0, 0.0], "mu": 0.3, "Q": [[0.0, 0.05, 0.0], [-0.05, 0.0, 0.0], [0.0, 0.0, 0.0]],
     "b": [0.02, 0.0, 0.01]},
])
def test_navigation_flag_curvature_matches_prediction(params):
    m = make_metric("cms_family", 3, **params)
    predicted = predicted_invariants(m.spec)
    for p in sample_tangent_points(m, SampleConfig(num_points=5, seed=3)):
        jets = TangentJets(m, p, 4)
        K = jets.K.value
        assert K == pytest.approx(predicted.flag_curvature(p.x, p.y, jets.F.value), rel=1e-5, abs=1e-9)
        assert np.max(np.abs(jets.R.value - jets.R_scalar_flag.value)) < 1e-6


def _navigation_draw(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    S = rng.uniform(-0.1, 0.1, size=(3, 3))
    return {"delta": float(rng.uniform(-0.1, 0.1)), "mu": float(rng.uniform(-0.3, 0.5)), "Q": (S - S.T).tolist(),
            "a": rng.uniform(-0.1, 0.1, size=3).tolist(), "b": rng.uniform(-0.05, 0.05, size=3).tolist()}


@pytest.mark.parametrize("seed", range(5))
def test_random_navigation_metrics_match_prediction(seed):
    m = make_metric("cms_family", 3, **_navigation_draw(seed))
    predicted = predicted_invariants(m.spec)
    for p in sample_tangent_points(m, SampleConfig(num_points=10, seed=seed)):
        jets = TangentJets(m, p, 4)
        assert jets.K.value == pytest.approx(predicted.flag_curvature(p.x, p.y, jets.F.value), rel=1e-6, abs=1e-10)


def test_cartan_matches_finite_differences(simple_randers3):
    y = np.array([0.0, 1.0, 0.0])
    C, I = cartan(simple_randers3, TangentPoint(X3, y))

    def square(z):
        return simple_randers3.value(X3, z) ** 2

    assert C[0, 1, 1] == pytest.approx(0.25 * third_derivative(square, y, 0, 1, 1), abs=1e-6)
    assert C[0, 0, 1] == pytest.approx(0.25 * third_derivative(square, y, 0, 0, 1), abs=1e-6)


def test_cartan_and_landsberg_annihilate_y(twisted_randers3):
    p = TangentPoint(X3, Y3)
    C, I = cartan(twisted_randers3, p)
    B, L, J = berwald_landsberg(twisted_randers3, p)
    np.testing.assert_allclose(C @ Y3, np.zeros((3, 3)), atol=1e-10)
    assert I @ Y3 == pytest.approx(0.0, abs=1e-10)
    np.testing.assert_allclose(L @ Y3, np.zeros((3, 3)), atol=1e-10)


def test_cartan_is_minus_one_homogeneous(twisted_randers3):
    C = cartan(twisted_randers3, TangentPoint(X3, Y3))[0]
    C2 = cartan(twisted_randers3, TangentPoint(X3, 2.0 * Y3))[0]
    np.testing.assert_allclose(C2, 0.5 * C, atol=1e-10)


def test_homogeneity_report(twisted_randers2):
    report = homogeneity_report(twisted_randers2, TangentPoint(X2, Y2))
    assert set(report) == {"F", "G", "R", "C", "euler_F2", "euler_Fy"}
    assert max(report.values()) < 1e-10


def test_F_is_horizontally_parallel(twisted_randers3):
    derivative = horizontal_derivative(lambda t: t.F, twisted_randers3, TangentPoint(X3, Y3))
    np.testing.assert_allclose(derivative, np.zeros(3), atol=1e-9)
    assert horizontal_derivative(lambda t: t.F, twisted_randers3, TangentPoint(X3, Y3), k="0") == pytest.approx(
        0.0, abs=1e-9)


def test_horizontal_derivative_of_a_constant(twisted_randers2):
    derivative = horizontal_derivative(lambda t: t.F * 0.0 + 2.0, twisted_randers2, TangentPoint(X2, Y2), k=1)
    assert derivative == pytest.approx(0.0, abs=1e-14)


def test_closed_form_has_symmetric_covariant_derivative(twisted_randers3):
    def gradient_of_scalar(t):
        phi = t.X[0] * t.X[1] + t.X[2] * t.X[2] * t.X[0]
        return t.grad_x(phi)

    D = horizontal_derivative(gradient_of_scalar, twisted_randers3, TangentPoint(X3, Y3), signature="l")
    np.testing.assert_allclose(D - D.T, np.zeros((3, 3)), atol=1e-9)


def test_euclidean_volume_density(euclidean3):
    assert bh_volume_density(euclidean3, X3) == pytest.approx(1.0, abs=1e-8)


def test_riemannian_volume_density_is_root_determinant(riemannian3):
    v = np.array([0.5, 1.0, 1.5]) * X3
    assert bh_volume_density(riemannian3, X3) == pytest.approx(np.sqrt(1.0 + v @ v), abs=1e-6)


def test_randers_volume_density(simple_randers3):
    assert bh_volume_density(simple_randers3, X3) == pytest.approx((1.0 - 0.25) ** 2, abs=1e-5)


def test_s_curvature_vanishes_for_riemannian_metrics(euclidean3, riemannian3):
    p = TangentPoint(X3, Y3)
    assert s_curvature(euclidean3, p) == pytest.approx(0.0, abs=1e-12)
    assert s_curvature(riemannian3, p) == pytest.approx(0.0, abs=1e-6)


def test_navigation_s_curvature_is_isotropic(cms_linear):
    n = 3
    for p in sample_tangent_points(cms_linear, SampleConfig(num_points=3)):
        ratio = s_curvature(cms_linear, p) / ((n + 1) * cms_linear.value(p.x, p.y))
        assert ratio == pytest.approx(0.1 * p.x[0], abs=1e-5)


def test_s_curvature_gradient_gives_the_flag_curvature(cms_linear):
    predicted = predicted_invariants(cms_linear.spec)
    for p in sample_tangent_points(cms_linear, SampleConfig(num_points=3)):
        jets = TangentJets(cms_linear, p, 4)
        ratio = s_curvature_jet(cms_linear, jets) / (4.0 * jets.F)
        gradient = jets.grad_x(ratio).value
        K = jets.K.value
        assert abs(K - predicted.sigma(list(p.x)) - 3.0 * gradient @ p.y / jets.F.value) < 1e-4


def test_almost_isotropic_s_fit(cms_linear):
    x = np.array([0.2, 0.1, -0.1])
    fit = almost_isotropic_s_fit(cms_linear, x)
    assert fit.c == pytest.approx(0.02, abs=1e-5)
    np.testing.assert_allclose(fit.eta, np.zeros(3), atol=1e-5)
    assert fit.residual < 1e-4
    assert s_curvature_consistency(cms_linear, x, 0.02) < 1e-5


def test_hamel_residual(euclidean2, funk2, twisted_randers3):
    assert np.max(np.abs(hamel_residual(euclidean2, TangentPoint(X2, Y2)))) == 0.0
    for p in sample_tangent_points(funk2, SampleConfig(num_points=20)):
        assert np.max(np.abs(hamel_residual(funk2, p))) < 1e-8
    assert np.max(np.abs(hamel_residual(twisted_randers3, TangentPoint(X3, Y3)))) > 1e-3


def test_funk_projective_factor_and_curvature(funk2):
    for p in sample_tangent_points(funk2, SampleConfig(num_points=20)):
        P, K_projective = projective(funk2, p)
        G = spray(funk2, p)[0]
        np.testing.assert_allclose(G, P * p.y, atol=1e-8)
        assert K_projective == pytest.approx(-0.25, abs=1e-7)
        assert scalar_flag_fit(funk2, p)[0] == pytest.approx(-0.25, abs=1e-7)


def test_euclidean_projective(euclidean2):
    P, K = projective(euclidean2, TangentPoint(X2, Y2))
    assert P == 0.0 and K == 0.0


def test_point_outside_domain(funk2):
    with pytest.raises(DomainError):
        funk2.point([1.2, 0.0], [1.0, 0.0])


def test_curvature_bundle(euclidean3):
    bundle = curvature_bundle(euclidean3, TangentPoint(np.zeros(3), [1.0, 0.0, 0.0]), with_s_curvature=True)
    assert bundle.F == pytest.approx(1.0)
    assert bundle.K == 0.0
    assert bundle.S == pytest.approx(0.0, abs=1e-12)
    assert set(bundle.as_dict()) >= {"F", "g", "riemann", "cartan", "berwald", "landsberg", "K", "S"}
