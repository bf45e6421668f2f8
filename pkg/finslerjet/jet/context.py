import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement

import numpy as np
from scipy.special import comb, factorial

from finslerjet.general_utils.errors import JetError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JetContext:
    """
    Index space of a truncated Taylor polynomial.

    Coefficients are stored densely in graded order: all multi-indices of total
    degree 0, then degree 1, and so on up to ``order``. The indices of degree
    at most ``k`` are therefore a prefix of the array, which makes truncation a
    slice. Order 0 only arises as the derivative of a first order jet.
    """
    num_vars: int
    order: int

    def __post_init__(self):
        if self.num_vars < 2 or self.num_vars % 2:
            raise JetError(f"A jet context needs an even number of variables (n positions and n directions)!"
                           f" Got num_vars={self.num_vars}.")
        if self.order < 0:
            raise JetError(f"The truncation order of a jet context cannot be negative! Got order={self.order}.")

    @property
    def dimension(self) -> int:
        return self.num_vars // 2

    @property
    def size(self) -> int:
        return _tables(self.num_vars, self.order).size

    @property
    def tables(self) -> "JetTables":
        return _tables(self.num_vars, self.order)

    def lower(self, order: int) -> "JetContext":
        return JetContext(self.num_vars, order)

    def prefix_size(self, order: int) -> int:
        return int(comb(self.num_vars + order, order, exact=True))


class JetTables:
    """Multi-index bookkeeping shared by every jet of one context."""

    def __init__(self, num_vars: int, order: int):
        self.num_vars = num_vars
        self.order = order
        blocks = [np.zeros((1, num_vars), dtype=np.int64)]
        for degree in range(1, order + 1):
            combos = np.array(list(combinations_with_replacement(range(num_vars), degree)), dtype=np.int64)
            block = np.zeros((len(combos), num_vars), dtype=np.int64)
            rows = np.repeat(np.arange(len(combos)), degree)
            np.add.at(block, (rows, combos.ravel()), 1)
            blocks.append(block)
        self.indices = np.concatenate(blocks, axis=0)
        self.size = len(self.indices)
        self.degrees = self.indices.sum(axis=1)
        self.degree_starts = np.searchsorted(self.degrees, np.arange(order + 2))
        self.radix = (order + 1) ** np.arange(num_vars, dtype=np.int64)
        keys = self.indices @ self.radix
        self._key_order = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._key_order]
        self.factorials = np.prod(factorial(self.indices), axis=1)
        self._derivative_tables = {}

    def rank(self, alphas) -> np.ndarray:
        alphas = np.asarray(alphas, dtype=np.int64)
        if np.any(alphas < 0) or np.any(alphas.sum(axis=-1) > self.order):
            raise JetError(f"Multi-index outside the truncation order {self.order}!")
        keys = alphas @ self.radix
        pos = np.searchsorted(self._sorted_keys, keys)
        return self._key_order[pos]

    @cached_property
    def product_table(self):
        """Pairs (I, J) with |α_I| + |α_J| <= order grouped by the rank K of α_I + α_J."""
        left, right = [], []
        for degree in range(self.order + 1):
            a = np.arange(self.degree_starts[degree], self.degree_starts[degree + 1])
            b = np.arange(0, self.degree_starts[self.order - degree + 1])
            left.append(np.repeat(a, len(b)))
            right.append(np.tile(b, len(a)))
        left = np.concatenate(left)
        right = np.concatenate(right)
        target = self.rank(self.indices[left] + self.indices[right])
        perm = np.argsort(target, kind="stable")
        left, right, target = left[perm], right[perm], target[perm]
        offsets = np.searchsorted(target, np.arange(self.size))
        logger.debug("built product table: %d variables, order %d, %d pairs", self.num_vars, self.order, len(left))
        return left, right, target, offsets

    def derivative_table(self, var: int):
        if var not in self._derivative_tables:
            lower = self.degree_starts[self.order]
            shifted = self.indices[:lower].copy()
            factor = (shifted[:, var] + 1).astype(float)
            shifted[:, var] += 1
            self._derivative_tables[var] = (self.rank(shifted), factor)
        return self._derivative_tables[var]

    @cached_property
    def position_mask(self) -> np.ndarray:
        """True for multi-indices without any direction variable."""
        half = self.num_vars // 2
        return ~np.any(self.indices[:, half:] > 0, axis=1)


@lru_cache(maxsize=None)
def _tables(num_vars: int, order: int) -> JetTables:
    return JetTables(num_vars, order)
