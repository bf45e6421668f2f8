import json
import logging
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from finslerjet.general_utils import constants
from finslerjet.general_utils.errors import SpecError
from finslerjet.general_utils.metric_families import MetricFamily, FAMILY_DEFAULTS

logger = logging.getLogger(__name__)


class MetricFamilySpec(BaseModel):
    """A metric fixture as read from a spec document: {family, dimension, params}."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    family: MetricFamily
    dimension: int = Field(ge=2, le=constants.MAX_DIMENSION)
    params: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_params(cls, family, dimension: int, **params) -> "MetricFamilySpec":
        family = family.value if isinstance(family, MetricFamily) else family
        return parse_spec({"family": family, "dimension": dimension, "params": params})

    def param(self, key: str) -> np.ndarray:
        return np.asarray(self.params[key], dtype=float)

    def echo(self) -> dict:
        return self.model_dump(mode="json")


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


class EuclideanParams(_Params):
    pass


class RiemannianParams(_Params):
    k: Optional[list[float]] = None


class SpaceFormParams(_Params):
    mu: float = 1.0


class RandersParams(_Params):
    alpha: Optional[list[list[float]]] = None
    b: Optional[list[float]] = None
    twist: float = 0.0


class CmsParams(_Params):
    delta: float = 0.0
    mu: float = 0.0
    Q: Optional[list[list[float]]] = None
    a: Optional[list[float]] = None
    b: Optional[list[float]] = None


class FunkParams(_Params):
    pass


class QuarticParams(_Params):
    epsilon: float = Field(default=0.1, gt=0.0)


PARAM_MODELS = {
    MetricFamily.EUCLIDEAN: EuclideanParams,
    MetricFamily.RIEMANNIAN: RiemannianParams,
    MetricFamily.SPACE_FORM: SpaceFormParams,
    MetricFamily.RANDERS: RandersParams,
    MetricFamily.CMS_FAMILY: CmsParams,
    MetricFamily.FUNK: FunkParams,
    MetricFamily.QUARTIC: QuarticParams,
}


def _describe(error: ValidationError, prefix: str = "") -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in (prefix,) + tuple(item["loc"]) if part != "")
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def _vector(params: dict, key: str, n: int, default) -> list[float]:
    value = params.get(key)
    if value is None:
        value = default
    value = np.asarray(value, dtype=float)
    if value.shape != (n,):
        raise SpecError(f"params.{key} must be a vector with {n} entries! Got shape {value.shape}.")
    return value.tolist()


def _matrix(params: dict, key: str, n: int, default) -> list[list[float]]:
    value = params.get(key)
    if value is None:
        value = default
    value = np.asarray(value, dtype=float)
    if value.shape != (n, n):
        raise SpecError(f"params.{key} must be a {n}x{n} matrix! Got shape {value.shape}.")
    return value.tolist()


def _complete(family: MetricFamily, n: int, params: dict) -> dict:
    """Fill defaults and check shapes that depend on the dimension."""
    params = dict(params)
    if family == MetricFamily.RIEMANNIAN:
        params["k"] = _vector(params, "k", n, [0.5, 1.0, 1.5, 2.0][:n])
    elif family == MetricFamily.RANDERS:
        params["alpha"] = _matrix(params, "alpha", n, np.eye(n))
        params["b"] = _vector(params, "b", n, np.eye(n)[0] * 0.3)
        alpha = np.asarray(params["alpha"])
        if not np.allclose(alpha, alpha.T) or np.linalg.eigvalsh(0.5 * (alpha + alpha.T))[0] <= 0:
            raise SpecError(f"params.alpha must be symmetric positive definite! Got {params['alpha']}.")
    elif family == MetricFamily.CMS_FAMILY:
        params["Q"] = _matrix(params, "Q", n, np.zeros((n, n)))
        params["a"] = _vector(params, "a", n, np.zeros(n))
        params["b"] = _vector(params, "b", n, np.zeros(n))
        Q = np.asarray(params["Q"])
        if not np.allclose(Q + Q.T, 0.0, atol=1e-14):
            raise SpecError(f"params.Q must be antisymmetric! Q + Qᵀ = {(Q + Q.T).tolist()}.")
    return params


def parse_spec(data: Any) -> MetricFamilySpec:
    """
    Validate a spec document in two stages: the envelope, then the
    family-specific parameters. Errors name the offending key.
    """
    if not isinstance(data, dict):
        raise SpecError(f"A metric spec must be a JSON object! Got {type(data).__name__}.")
    try:
        envelope = MetricFamilySpec.model_validate(data)
    except ValidationError as e:
        raise SpecError(f"Invalid metric spec! {_describe(e)}") from e
    params = {**FAMILY_DEFAULTS[envelope.family.value], **envelope.params}
    try:
        validated = PARAM_MODELS[envelope.family].model_validate(params)
    except ValidationError as e:
        raise SpecError(f"Invalid parameters for {envelope.family.value}! {_describe(e, 'params')}") from e
    params = _complete(envelope.family, envelope.dimension, validated.model_dump())
    spec = MetricFamilySpec(family=envelope.family, dimension=envelope.dimension, params=params)
    logger.debug("parsed metric spec %s", spec.echo())
    return spec


def load_spec(path) -> MetricFamilySpec:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise SpecError(f"Malformed JSON in {path}! {e.msg} at line {e.lineno}, column {e.colno}.") from e
    except OSError as e:
        raise SpecError(f"Cannot read the metric spec {path}! {e}") from e
    return parse_spec(data)
