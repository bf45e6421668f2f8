import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Union

import numpy as np

from finslerjet.general_utils import constants
from finslerjet.general_utils.app_utils import Applicability, CheckKind, Verdict
from finslerjet.jet import JetValue

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResidual:
    """Residual of one identity at one tangent point (pointwise) or one position (existence)."""
    residual: float
    scale: float
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class IdentityCheck:
    """
    A named identity with its evaluator.

    ``required_order`` is the order of the F-jet the evaluator needs;
    ``source_depth`` is the number of x-derivatives it takes of θ and σ;
    ``summarize`` condenses the per-point details into the report details.
    """
    name: str
    description: str
    applicability: Applicability
    kind: CheckKind
    required_order: int
    evaluate: Callable[..., CheckResidual]
    source_depth: int = 0
    min_dimension: int = 2
    skip_on_vanishing_theta: bool = False
    summarize: Optional[Callable[[list, float], dict]] = None

    @property
    def uses_isotropy(self) -> bool:
        return self.applicability == Applicability.WEAKLY_ISOTROPIC_ONLY or self.source_depth > 0


@dataclass
class IdentityReport:
    name: str
    verdict: Verdict
    tolerance: float
    max_residual: Optional[float] = None
    mean_residual: Optional[float] = None
    points: int = 0
    residuals: list = field(default_factory=list)
    worst_point: Optional[dict] = None
    jet_order: Optional[int] = None
    isotropy_source: Optional[str] = None
    skipped_reason: Optional[str] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != Verdict.FAIL

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "points": self.points,
            "residuals": self.residuals,
            "worst_point": self.worst_point,
            "jet_order": self.jet_order,
            "isotropy_source": self.isotropy_source,
            "skipped_reason": self.skipped_reason,
            "details": self.details,
        }


def _magnitude(term: Union[JetValue, np.ndarray, float]) -> float:
    if isinstance(term, JetValue):
        term = term.value
    term = np.asarray(term, dtype=float)
    return float(np.max(np.abs(term))) if term.size else 0.0


def relative_residual(residual, *terms, details: Optional[dict] = None) -> CheckResidual:
    """
    Max-norm of ``residual`` over the largest term entering the identity.

    Below SCALE_FLOOR the terms are numerically zero and the residual is
    reported in absolute terms.
    """
    scale = max([_magnitude(t) for t in terms] + [0.0])
    absolute = _magnitude(residual)
    value = absolute / scale if scale >= constants.SCALE_FLOOR else absolute
    return CheckResidual(residual=value, scale=scale, details=details or {})


def place(tensor: Any, source: str, target: str):
    """
    Broadcastable view of ``tensor`` (axes named by ``source``) in the axis
    layout ``target``; axes missing from ``source`` get length one.
    """
    if not source:
        return tensor
    order = sorted(range(len(source)), key=lambda a: target.index(source[a]))
    if isinstance(tensor, JetValue):
        moved = tensor.transpose(*order)
    else:
        moved = np.transpose(np.asarray(tensor, dtype=float), order)
    key = tuple(slice(None) if axis in source else None for axis in target)
    return moved[key]


def least_squares_fit(rows, rhs) -> tuple[np.ndarray, CheckResidual]:
    """Fit of scalar unknowns at a fixed position; the post-fit residual is relative to the right-hand side."""
    rows, rhs = np.array(rows, dtype=float), np.array(rhs, dtype=float)
    solution, _, _, _ = np.linalg.lstsq(rows, rhs, rcond=None)
    fitted = rows @ solution
    return solution, relative_residual(fitted - rhs, rhs, fitted)
