from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

import numpy as np

from finslerjet.general_utils.errors import DomainError
from finslerjet.general_utils.sampling import SampleConfig, TangentPoint


@dataclass(frozen=True, eq=False)
class MetricField:
    """
    A Finsler metric F(x, y) given by a pure evaluator.

    ``evaluate`` receives the n position components and the n direction
    components as separate arguments lists; each component may be a float, a
    numpy array (evaluated elementwise) or a JetValue, so the same expression
    serves plain evaluation, batched quadrature and jet differentiation.
    """
    dimension: int
    evaluate: Callable[[Sequence[Any], Sequence[Any]], Any]
    domain_check: Callable[[np.ndarray], bool]
    name: str = "metric"
    spec: Optional[Any] = None
    box: Optional[Sequence[Sequence[float]]] = None

    def __call__(self, x, y):
        return self.evaluate(list(x), list(y))

    def require(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise DomainError(f"Expected a position with {self.dimension} coordinates for {self.name}! Got shape"
                              f" {x.shape}.")
        if not self.domain_check(x):
            raise DomainError(f"Position outside the domain of {self.name}! x = {x.tolist()}.")
        return x

    def value(self, x, y) -> float:
        x = self.require(x)
        return float(self.evaluate(list(x), list(np.asarray(y, dtype=float))))

    def point(self, x, y) -> TangentPoint:
        p = TangentPoint(x, y)
        self.require(p.x)
        return p

    def sampling_bounds(self, config: SampleConfig) -> np.ndarray:
        if config.box is None and self.box is not None:
            return SampleConfig(box=self.box).bounds(self.dimension)
        return config.bounds(self.dimension)
