import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.app_utils import Applicability, CheckKind, IsotropySourceKind, Verdict
from finslerjet.general_utils.errors import ApplicabilityError, JetError
from finslerjet.general_utils.sampling import (SampleConfig, TangentPoint, sample_positions, sample_tangent_points,
                                               spiral_directions)
from finslerjet.geometry.metric_field import MetricField
from finslerjet.geometry.tangent_jets import TangentJets
from finslerjet.detect.weak_isotropy import scalar_flag_residual
from finslerjet.identities.check import CheckResidual, IdentityCheck, IdentityReport
from finslerjet.identities.isotropy_source import IsotropySource

logger = logging.getLogger(__name__)


class JetCache:
    """TangentJets shared between checks, keyed by tangent point and order."""

    def __init__(self, metric: MetricField):
        self.metric = metric
        self._jets = {}
        self._lock = threading.Lock()

    def get(self, point: TangentPoint, order: int) -> TangentJets:
        key = (point.key(), order)
        with self._lock:
            jets = self._jets.get(key)
        if jets is None:
            jets = TangentJets(self.metric, point, order)
            with self._lock:
                jets = self._jets.setdefault(key, jets)
        return jets


def _skipped(check: IdentityCheck, tolerance: float, reason: str, order: Optional[int] = None,
             source: Optional[IsotropySource] = None) -> IdentityReport:
    logger.info("%s skipped: %s", check.name, reason)
    return IdentityReport(name=check.name, verdict=Verdict.SKIPPED, tolerance=tolerance, jet_order=order,
                          isotropy_source=source.kind.value if source else None, skipped_reason=reason)


def _hamel_violation(jets: TangentJets) -> float:
    mixed = np.abs(jets.grad_y(jets.Fx).value)
    scale = max(float(np.max(mixed)), constants.SCALE_FLOOR)
    return float(np.max(np.abs(jets.hamel.value))) / scale


def _applicability_violation(check: IdentityCheck, points: list[TangentPoint],
                             positions: np.ndarray, cache: JetCache,
                             source: Optional[IsotropySource]) -> Optional[str]:
    if check.applicability == Applicability.SCALAR_FLAG_ONLY:
        order = max(check.required_order, constants.REQUIRED_ORDER["riemann"])
        for p in points:
            residual = scalar_flag_residual(cache.get(p, order))
            if residual > constants.SCALAR_FLAG_TOLERANCE:
                return (f"not of scalar flag curvature (scalar flag residual {residual:.3e} at x ="
                        f" {p.x.tolist()})")
    elif check.applicability == Applicability.PROJECTIVELY_FLAT_ONLY:
        order = max(check.required_order, constants.REQUIRED_ORDER["hamel"])
        for p in points:
            residual = _hamel_violation(cache.get(p, order))
            if residual > constants.PROJECTIVE_TOLERANCE:
                return f"not projectively flat (Hamel residual {residual:.3e} at x = {p.x.tolist()})"
    if check.applicability == Applicability.WEAKLY_ISOTROPIC_ONLY or check.uses_isotropy:
        try:
            for x in positions:
                source.require(x)
        except ApplicabilityError as e:
            return str(e)
    return None


def _theta_vanishes(check: IdentityCheck, points: list[TangentPoint], order: int, cache: JetCache,
                    source: IsotropySource) -> bool:
    largest = 0.0
    for p in points:
        theta, _ = source.theta_sigma(cache.get(p, order), check.source_depth)
        largest = max(largest, max(abs(t.value) for t in theta))
    return largest < constants.THETA_ZERO


def _evaluate(check: IdentityCheck, target, source):
    try:
        return check.evaluate(target, source)
    except JetError as e:
        raise JetError(f"Insufficient jet order for {check.name}! {e}") from e


def run_identity(check: IdentityCheck, m: MetricField, sampler: Optional[SampleConfig] = None,
                 tolerance: float = constants.DEFAULT_TOLERANCE, jet_order: Optional[int] = None,
                 source: Optional[IsotropySource] = None, cache: Optional[JetCache] = None) -> IdentityReport:
    """
    Evaluates one identity over the sampled tangent points (pointwise checks)
    or over the sampled positions with a fit across directions (existence checks).

    Parameters:
    - check: the identity
    - m: the metric
    - sampler: sampling configuration; identical configs give identical reports
    - tolerance: the check passes when the largest normalized residual is below it
    - jet_order: optional override of the F-jet order, never below the required order
    - source: θ/σ provider for checks on weakly isotropic metrics; chosen from the metric family when omitted
    - cache: TangentJets shared with other checks

    Returns:
    - the IdentityReport; unmet preconditions give a skipped report, not a failure
    """
    sampler = sampler or SampleConfig()
    if jet_order is not None and jet_order < check.required_order:
        raise JetError(f"Insufficient jet order for {check.name}! Requested {jet_order}, the identity needs"
                       f" {check.required_order}.")
    order = max(check.required_order, jet_order or 0)
    n = m.dimension
    if n < check.min_dimension:
        return _skipped(check, tolerance, f"requires n ≥ {check.min_dimension}", order)
    cache = cache or JetCache(m)
    if check.uses_isotropy and source is None:
        source = IsotropySource.for_metric(m, sampler=sampler)
    elif not check.uses_isotropy:
        source = None

    points = sample_tangent_points(m, sampler)
    positions = sample_positions(m, sampler)
    reason = _applicability_violation(check, points, positions, cache, source)
    if reason is not None:
        return _skipped(check, tolerance, reason, order, source)
    try:
        if check.skip_on_vanishing_theta and _theta_vanishes(check, points, order, cache, source):
            return _skipped(check, tolerance, "not applicable: θ vanishes at every sample", order, source)

        results: list[CheckResidual] = []
        locations: list[dict] = []
        if check.kind == CheckKind.POINTWISE:
            for p in points:
                results.append(_evaluate(check, cache.get(p, order), source))
                locations.append({"x": p.x.tolist(), "y": p.y.tolist()})
        else:
            directions = spiral_directions(n, sampler.direction_count(n))
            for x in positions:
                samples = [cache.get(TangentPoint(x, u), order) for u in directions]
                results.append(_evaluate(check, samples, source))
                locations.append({"x": x.tolist()})
    except ApplicabilityError as e:
        return _skipped(check, tolerance, str(e), order, source)

    residuals = [r.residual for r in results]
    worst = int(np.argmax(residuals))
    if constants.DEBUG_TRACE:
        for location, r in zip(locations, results):
            logger.info("%s at %s: residual %.3e (scale %.3e)", check.name, location, r.residual, r.scale)
    details = {"worst_details": results[worst].details}
    if check.summarize is not None:
        details.update(check.summarize([r.details for r in results], tolerance))
    max_residual = float(residuals[worst])
    verdict = Verdict.PASS if max_residual < tolerance else Verdict.FAIL
    logger.info("%s: %s, max residual %.3e over %d %s", check.name, verdict.value, max_residual, len(results),
                "points" if check.kind == CheckKind.POINTWISE else "positions")
    return IdentityReport(name=check.name, verdict=verdict, tolerance=tolerance, max_residual=max_residual,
                          mean_residual=float(np.mean(residuals)), points=len(results), residuals=residuals,
                          worst_point=locations[worst], jet_order=order,
                          isotropy_source=source.kind.value if source else None, details=details)


def run_suite(checks: Sequence[IdentityCheck], m: MetricField, sampler: Optional[SampleConfig] = None,
              tolerance: float = constants.DEFAULT_TOLERANCE, jet_order: Optional[int] = None,
              source_kind: Optional[IsotropySourceKind] = None, workers: int = 1) -> list[IdentityReport]:
    """
    Runs the checks with one shared TangentJets cache and θ/σ source; with
    ``workers`` > 1 the checks are spread over a thread pool. Reports come
    back in the order of ``checks`` either way.
    """
    sampler = sampler or SampleConfig()
    cache = JetCache(m)
    source = None
    if any(check.uses_isotropy for check in checks):
        source = IsotropySource.for_metric(m, source_kind, sampler)

    def run(check: IdentityCheck) -> IdentityReport:
        return run_identity(check, m, sampler, tolerance, jet_order, source, cache)

    if workers <= 1:
        return [run(check) for check in checks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, checks))
