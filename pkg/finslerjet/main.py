from typing import Optional, Union

from finslerjet.detect.classify import GridVerdict, detect_over_grid
from finslerjet.families import MetricFamilySpec, construct, load_spec, parse_spec
from finslerjet.general_utils import constants
from finslerjet.general_utils.app_utils import IsotropySourceKind
from finslerjet.general_utils.sampling import SampleConfig
from finslerjet.geometry import curvature_bundle, homogeneity_report
from finslerjet.geometry.metric_field import MetricField
from finslerjet.identities import IdentityReport, resolve_checks, run_suite

SpecLike = Union[MetricFamilySpec, dict, str]


def load_metric(spec: SpecLike) -> MetricField:
    """A metric from a validated spec, a spec document or the path of a JSON spec file."""
    if isinstance(spec, MetricFamilySpec):
        return construct(spec)
    if isinstance(spec, dict):
        return construct(parse_spec(spec))
    return construct(load_spec(spec))


def inspect_metric(spec: SpecLike, x, y, with_s_curvature: bool = True) -> dict:
    m = load_metric(spec)
    p = m.point(x, y)
    bundle = curvature_bundle(m, p, with_s_curvature=with_s_curvature)
    return {"bundle": bundle, "homogeneity": homogeneity_report(m, p)}


def verify_metric(spec: SpecLike, checks="all", sampler: Optional[SampleConfig] = None,
                  tolerance: float = constants.DEFAULT_TOLERANCE, jet_order: Optional[int] = None,
                  source_kind: Optional[IsotropySourceKind] = None, workers: int = 1) -> list[IdentityReport]:
    return run_suite(resolve_checks(checks), load_metric(spec), sampler, tolerance, jet_order, source_kind, workers)


def detect_metric(spec: SpecLike, grid: int = constants.DEFAULT_GRID, sampler: Optional[SampleConfig] = None,
                  workers: int = 1) -> list[GridVerdict]:
    return detect_over_grid(load_metric(spec), grid, sampler, workers)
