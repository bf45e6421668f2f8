import json

import numpy as np
import pytest

from finslerjet.families import (MetricFamilySpec, construct, load_spec, parse_spec, predicted_invariants,
                                 probe_lattice)
from finslerjet.general_utils.errors import DomainError, SpecError
from finslerjet.general_utils.metric_families import FAMILY_DEFAULTS, FAMILY_HELP, MetricFamily
from finslerjet.jet import JetContext, extract_partial, seed_variable

from conftest import make_metric, make_spec


def test_every_family_is_documented():
    for family in MetricFamily:
        assert family.value in FAMILY_DEFAULTS
        assert family.value in FAMILY_HELP


def test_defaults_are_completed():
    spec = make_spec("cms_family", 3, delta=0.1)
    assert spec.params["mu"] == 0.0
    assert spec.params["a"] == [0.0, 0.0, 0.0]
    assert np.asarray(spec.params["Q"]).shape == (3, 3)
    randers = make_spec("randers", 2)
    assert randers.params["alpha"] == [[1.0, 0.0], [0.0, 1.0]]
    assert randers.params["b"] == [0.3, 0.0]
    assert make_spec("riemannian", 2).params["k"] == [0.5, 1.0]


def test_from_params_accepts_the_enum():
    spec = MetricFamilySpec.from_params(MetricFamily.FUNK, 2)
    assert spec.family == MetricFamily.FUNK
    assert spec.echo() == {"family": "funk", "dimension": 2, "params": {}}


@pytest.mark.parametrize("data", [
    {"family": "hyperbolic", "dimension": 2},
    {"family": "euclidean", "dimension": 1},
    {"family": "euclidean", "dimension": 7},
    {"family": "euclidean", "dimension": 2, "extra": True},
    {"family": "euclidean", "dimension": 2, "params": {"mu": 1.0}},
    {"family": "quartic", "dimension": 2, "params": {"epsilon": -1.0}},
    {"family": "cms_family", "dimension": 3, "params": {"a": [0.1, 0.0]}},
    {"family": "cms_family", "dimension": 2, "params": {"Q": [[0.0, 1.0], [1.0, 0.0]]}},
    {"family": "randers", "dimension": 2, "params": {"alpha": [[1.0, 0.0], [0.0, -1.0]]}},
    ["euclidean", 2],
])
def test_invalid_specs(data):
    with pytest.raises(SpecError):
        parse_spec(data)


def test_error_names_the_offending_key():
    with pytest.raises(SpecError, match="params.epsilon"):
        parse_spec({"family": "quartic", "dimension": 2, "params": {"epsilon": 0.0}})


def test_strong_navigation_field_is_rejected():
    with pytest.raises(SpecError, match="too strong"):
        make_metric("cms_family", 3, delta=2.0)


def test_strong_randers_form_is_rejected():
    with pytest.raises(SpecError, match="too strong"):
        make_metric("randers", 2, b=[1.2, 0.0])


def test_load_spec(tmp_path, write_spec):
    spec = load_spec(write_spec("space_form", 2, mu=0.5))
    assert spec.family == MetricFamily.SPACE_FORM
    assert spec.params["mu"] == 0.5
    broken = tmp_path / "broken.json"
    broken.write_text("{\"family\": ", encoding="utf-8")
    with pytest.raises(SpecError, match="Malformed JSON"):
        load_spec(str(broken))
    with pytest.raises(SpecError):
        load_spec(str(tmp_path / "missing.json"))


def test_load_spec_round_trips_the_echo(tmp_path):
    spec = make_spec("randers", 3, twist=0.2)
    path = tmp_path / "echo.json"
    path.write_text(json.dumps(spec.echo()), encoding="utf-8")
    assert load_spec(str(path)) == spec


def test_navigation_without_wind_is_euclidean():
    m = make_metric("cms_family", 3)
    assert m.value([0.1, 0.2, 0.3], [1.0, 2.0, 2.0]) == pytest.approx(3.0, rel=1e-14)


def test_randers_values(simple_randers3):
    assert simple_randers3.value([0.1, 0.0, 0.0], [1.0, 0.0, 0.0]) == pytest.approx(1.5)
    assert simple_randers3.value([0.1, 0.0, 0.0], [-1.0, 0.0, 0.0]) == pytest.approx(0.5)


def test_twisted_randers_depends_on_x(twisted_randers2):
    y = [0.6, 0.8]
    assert twisted_randers2.value([0.0, 0.0], y) != pytest.approx(twisted_randers2.value([0.2, 0.1], y))


def test_funk_values(funk2):
    assert funk2.value([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)
    assert funk2.value([0.5, 0.0], [1.0, 0.0]) == pytest.approx(2.0)
    assert funk2.value([0.5, 0.0], [-1.0, 0.0]) == pytest.approx(2.0 / 3.0)
    with pytest.raises(DomainError):
        funk2.value([1.0, 0.0], [1.0, 0.0])


def test_quartic_value(quartic3):
    assert quartic3.value(np.zeros(3), [1.0, 0.0, 0.0]) == pytest.approx(np.sqrt(1.1))
    assert quartic3.value(np.zeros(3), [2.0, 0.0, 0.0]) == pytest.approx(2.0 * np.sqrt(1.1))


def test_space_form_value():
    m = make_metric("space_form", 3, mu=1.0)
    assert m.value([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]) == pytest.approx(np.sqrt(0.5))
    assert m.value([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]) == pytest.approx(0.5)


def test_negative_curvature_space_form_domain():
    m = make_metric("space_form", 2, mu=-1.0)
    assert m.domain_check(np.array([0.5, 0.5]))
    assert not m.domain_check(np.array([1.0, 0.5]))


def test_evaluators_accept_arrays_and_jets(twisted_randers2):
    ys = np.array([[0.6, 0.8], [1.0, 0.0], [0.0, -2.0]])
    batched = twisted_randers2.evaluate([0.1, -0.2], [ys[:, 0], ys[:, 1]])
    expected = [twisted_randers2.value([0.1, -0.2], y) for y in ys]
    np.testing.assert_allclose(batched, expected, rtol=1e-14)
    ctx = JetContext(4, 2)
    X = [seed_variable(ctx, 0, 0.1), seed_variable(ctx, 1, -0.2)]
    Y = [seed_variable(ctx, 2, 0.6), seed_variable(ctx, 3, 0.8)]
    jet = twisted_randers2.evaluate(X, Y)
    assert jet.value == pytest.approx(expected[0], rel=1e-14)
    # F is one-homogeneous in y, so y^k ∂F/∂y^k = F
    euler = 0.6 * extract_partial(jet, (0, 0, 1, 0)) + 0.8 * extract_partial(jet, (0, 0, 0, 1))
    assert euler == pytest.approx(expected[0], rel=1e-13)


def test_probe_lattice():
    lattice = probe_lattice(2)
    assert lattice.shape == (25, 2)
    assert lattice.min() == -0.5 and lattice.max() == 0.5


def test_predicted_invariants_linear(cms_linear):
    predicted = predicted_invariants(cms_linear.spec).at(np.zeros(3))
    assert predicted["c"] == 0.0
    np.testing.assert_allclose(predicted["theta"], [0.1, 0.0, 0.0])
    assert predicted["sigma"] == pytest.approx(0.0, abs=1e-15)
    assert predicted["s_coefficient"] == 0.0


def test_predicted_invariants_constant(cms_delta):
    predicted = predicted_invariants(cms_delta.spec)
    at_origin = predicted.at(np.zeros(3))
    assert at_origin["c"] == pytest.approx(0.1)
    np.testing.assert_allclose(at_origin["theta"], np.zeros(3), atol=1e-15)
    assert at_origin["sigma"] == pytest.approx(-0.01)
    assert at_origin["s_coefficient"] == pytest.approx(0.4)
    x = np.array([0.2, -0.1, 0.1])
    assert predicted.flag_curvature(x, [1.0, 0.0, 0.0], 1.0) == pytest.approx(-0.01)


def test_predicted_c_with_curvature(cms_radial):
    predicted = predicted_invariants(cms_radial.spec)
    x = np.array([0.3, 0.0, 0.4])
    assert predicted.at(x)["c"] == pytest.approx(0.1 / np.sqrt(1.0 + 0.2 * 0.25))


def test_space_form_prediction_is_constant():
    predicted = predicted_invariants(make_spec("space_form", 3, mu=0.5))
    assert predicted.flag_curvature([0.1, 0.2, 0.0], [0.0, 1.0, 0.0], 1.3) == pytest.approx(0.5)


def test_prediction_needs_the_navigation_family(twisted_randers2):
    with pytest.raises(SpecError):
        predicted_invariants(twisted_randers2.spec)


def test_construct_keeps_the_spec():
    spec = make_spec("quartic", 2, epsilon=0.2)
    m = construct(spec)
    assert m.spec == spec
    assert m.dimension == 2
    assert "quartic" in m.name
