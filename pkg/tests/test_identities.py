import pytest

from finslerjet.general_utils.app_utils import Applicability, IsotropySourceKind, Verdict
from finslerjet.general_utils.errors import JetError, SpecError
from finslerjet.general_utils.sampling import SampleConfig
from finslerjet.identities import (REGISTRY, IsotropySource, get_check, registry, relative_residual, resolve_checks,
                                   run_identity, run_suite)

SCALAR_FLAG_CHECKS = ["scalar_flag_R", "scalar_flag_R3", "scalar_flag_R4", "scalar_flag_trace", "lemma31_Kijk",
                      "lemma32_Kk", "Jk0_formula"]
ISOTROPIC_CHECKS = ["theta_closed", "ricci_oneform", "f_existence", "h_existence", "lambda_proportionality"]
BIANCHI_CHECKS = ["bianchi_from_berwald", "bianchi_cyclic", "bianchi_contracted", "bianchi_trace_lm",
                  "bianchi_trace_li", "CL_relation"]
PROJECTIVE_CHECKS = ["hamel", "berwald_PF", "berwald_PK", "proj_K_identity"]


def _by_name(reports):
    return {report.name: report for report in reports}


def test_registry():
    checks = registry()
    assert len(checks) == 24
    assert len({check.name for check in checks}) == 24
    assert get_check("bianchi_cyclic").required_order == 7
    assert get_check("hamel").applicability == Applicability.ANY_METRIC
    assert get_check("f_existence").uses_isotropy
    assert not get_check("scalar_flag_R").uses_isotropy


def test_resolve_checks():
    assert len(resolve_checks("all")) == 24
    assert len(resolve_checks(None)) == 24
    assert [c.name for c in resolve_checks("hamel, berwald_PF")] == ["hamel", "berwald_PF"]
    assert [c.name for c in resolve_checks(["CL_relation"])] == ["CL_relation"]
    with pytest.raises(SpecError, match="Unknown identity check"):
        resolve_checks("hamel,not_a_check")
    with pytest.raises(SpecError):
        resolve_checks(" , ")


def test_relative_residual_floor():
    assert relative_residual(2e-12, 1e-11).residual == pytest.approx(2e-12)
    assert relative_residual(1e-6, 2.0, 4.0).residual == pytest.approx(2.5e-7)


def test_euclidean_suite_has_no_failures(euclidean2, small_sampler):
    reports = run_suite(registry(), euclidean2, small_sampler)
    assert [r.name for r in reports] == list(REGISTRY)
    for report in reports:
        assert report.verdict != Verdict.FAIL, report.name
        if report.verdict == Verdict.PASS:
            assert report.max_residual < 1e-12, report.name


@pytest.mark.slow
def test_navigation_metric_satisfies_scalar_flag_and_isotropic_identities(cms_radial, small_sampler):
    reports = _by_name(run_suite(resolve_checks(SCALAR_FLAG_CHECKS + ISOTROPIC_CHECKS), cms_radial, small_sampler))
    for name, report in reports.items():
        assert report.verdict == Verdict.PASS, (name, report.max_residual, report.skipped_reason)
    assert reports["f_existence"].isotropy_source == IsotropySourceKind.PREDICTED.value
    assert reports["scalar_flag_R"].isotropy_source is None
    assert not reports["lemma32_Kk"].details["forms_disagree"]


def test_lemma31_on_linear_navigation(cms_linear, small_sampler):
    report = run_identity(get_check("lemma31_Kijk"), cms_linear, small_sampler)
    assert report.verdict == Verdict.PASS
    assert report.points == 3


@pytest.mark.slow
def test_predicted_and_fitted_sources_agree(cms_radial, small_sampler):
    checks = resolve_checks(ISOTROPIC_CHECKS)
    predicted = _by_name(run_suite(checks, cms_radial, small_sampler, source_kind=IsotropySourceKind.PREDICTED))
    fitted = _by_name(run_suite(checks, cms_radial, small_sampler, source_kind=IsotropySourceKind.FITTED))
    for name in ISOTROPIC_CHECKS:
        assert predicted[name].verdict == Verdict.PASS, (name, predicted[name].max_residual)
        assert fitted[name].verdict == Verdict.PASS, (name, fitted[name].max_residual)
        assert predicted[name].isotropy_source == IsotropySourceKind.PREDICTED.value
        assert fitted[name].isotropy_source == IsotropySourceKind.FITTED.value
        assert fitted[name].max_residual == pytest.approx(predicted[name].max_residual, abs=1e-8), name


def test_lambda_proportionality_fails_off_the_radial_case(cms_linear, small_sampler):
    # dσ = 6⟨a,x⟩a - 4|a|²x is not parallel to θ = a once x leaves the a axis
    report = run_identity(get_check("lambda_proportionality"), cms_linear, small_sampler)
    assert report.verdict == Verdict.FAIL
    assert report.max_residual > 1e-2


@pytest.mark.slow
def test_bianchi_identities_hold_for_a_generic_metric(twisted_randers2, small_sampler):
    for report in run_suite(resolve_checks(BIANCHI_CHECKS), twisted_randers2, small_sampler):
        assert report.verdict == Verdict.PASS, (report.name, report.max_residual)


def test_negative_controls(twisted_randers3, small_sampler):
    reports = _by_name(run_suite(resolve_checks(["hamel", "scalar_flag_R", "scalar_flag_R3", "berwald_PK"]),
                                 twisted_randers3, small_sampler))
    assert reports["hamel"].verdict == Verdict.FAIL
    assert reports["hamel"].max_residual > 1e-3
    assert reports["scalar_flag_R"].verdict == Verdict.FAIL
    assert reports["scalar_flag_R3"].verdict == Verdict.SKIPPED
    assert "scalar flag" in reports["scalar_flag_R3"].skipped_reason
    assert reports["berwald_PK"].verdict == Verdict.SKIPPED
    assert "projectively flat" in reports["berwald_PK"].skipped_reason


def test_funk_is_projectively_flat(funk2, small_sampler):
    for report in run_suite(resolve_checks(PROJECTIVE_CHECKS), funk2, small_sampler):
        assert report.verdict == Verdict.PASS, (report.name, report.max_residual)


def test_dimension_two_skips(twisted_randers2, small_sampler):
    report = run_identity(get_check("lemma32_Kk"), twisted_randers2, small_sampler)
    assert report.verdict == Verdict.SKIPPED
    assert report.skipped_reason == "requires n ≥ 3"
    assert report.passed


def test_vanishing_theta_skips(space_form3, small_sampler):
    report = run_identity(get_check("f_existence"), space_form3, small_sampler)
    assert report.verdict == Verdict.SKIPPED
    assert "θ vanishes" in report.skipped_reason


def test_insufficient_jet_order(euclidean2, small_sampler):
    with pytest.raises(JetError, match="bianchi_cyclic"):
        run_identity(get_check("bianchi_cyclic"), euclidean2, small_sampler, jet_order=3)


def test_higher_jet_order_is_recorded(funk2, small_sampler):
    report = run_identity(get_check("hamel"), funk2, small_sampler, jet_order=4)
    assert report.jet_order == 4
    assert report.verdict == Verdict.PASS


def test_predicted_source_needs_the_navigation_family(twisted_randers3):
    with pytest.raises(SpecError):
        IsotropySource(twisted_randers3, IsotropySourceKind.PREDICTED)
    assert IsotropySource.for_metric(twisted_randers3).kind == IsotropySourceKind.FITTED


def test_reports_are_deterministic(twisted_randers3):
    sampler = SampleConfig(num_points=4, seed=11)
    checks = resolve_checks(["hamel", "scalar_flag_R"])
    first = [r.as_dict() for r in run_suite(checks, twisted_randers3, sampler)]
    second = [r.as_dict() for r in run_suite(checks, twisted_randers3, sampler)]
    assert first == second


def test_thread_pool_gives_the_serial_result(funk2, small_sampler):
    checks = resolve_checks(PROJECTIVE_CHECKS + ["scalar_flag_R", "CL_relation"])
    serial = [r.as_dict() for r in run_suite(checks, funk2, small_sampler)]
    parallel = [r.as_dict() for r in run_suite(checks, funk2, small_sampler, workers=3)]
    assert serial == parallel


def test_report_layout(funk2, small_sampler):
    report = run_identity(get_check("berwald_PF"), funk2, small_sampler)
    data = report.as_dict()
    assert data["verdict"] == "pass"
    assert len(data["residuals"]) == 3
    assert set(data["worst_point"]) == {"x", "y"}
    assert data["jet_order"] == 2
