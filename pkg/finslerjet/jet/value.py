import math
from numbers import Number
from typing import Sequence, Union

import numpy as np
from scipy.special import binom, factorial

from finslerjet.general_utils.errors import JetError
from finslerjet.jet.context import JetContext


def newton_steps(order: int) -> int:
    return max(0, math.ceil(math.log2(order + 1)))


def _pad(coeffs: np.ndarray, ndim: int) -> np.ndarray:
    missing = ndim - (coeffs.ndim - 1)
    if missing <= 0:
        return coeffs
    return coeffs.reshape((coeffs.shape[0],) + (1,) * missing + coeffs.shape[1:])


class JetValue:
    """
    Truncated Taylor polynomial of a (possibly tensor valued) quantity.

    ``coeffs[r]`` holds ∂^α f / α! for the multi-index α of rank r in the
    context; trailing axes are tensor axes. Jets are immutable.
    """
    __slots__ = ("context", "coeffs")
    __array_ufunc__ = None

    def __init__(self, context: JetContext, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[0] != context.size:
            raise JetError(f"Coefficient array does not match the context! Expected {context.size} coefficients,"
                           f" got {coeffs.shape[0]}.")
        coeffs.flags.writeable = False
        self.context = context
        self.coeffs = coeffs

    @classmethod
    def constant(cls, context: JetContext, value) -> "JetValue":
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros((context.size,) + value.shape)
        coeffs[0] = value
        return cls(context, coeffs)

    @classmethod
    def stack(cls, jets: Sequence["JetValue"], axis: int = 0) -> "JetValue":
        jets = list(jets)
        reference = next((j for j in jets if isinstance(j, JetValue)), None)
        if reference is None:
            raise JetError("Cannot stack a sequence without any jet!")
        order = min(j.order for j in jets if isinstance(j, JetValue))
        context = reference.context.lower(order)
        lifted = []
        for j in jets:
            if not isinstance(j, JetValue):
                j = JetValue.constant(context, j)
            _check_compatible(reference, j)
            lifted.append(j.truncate(order).coeffs)
        shape = np.broadcast_shapes(*[c.shape[1:] for c in lifted])
        lifted = [np.broadcast_to(_pad(c, len(shape)), (context.size,) + shape) for c in lifted]
        if axis < 0:
            axis += len(shape) + 1
        return cls(context, np.stack(lifted, axis=axis + 1))

    # structure

    @property
    def order(self) -> int:
        return self.context.order

    @property
    def shape(self) -> tuple:
        return self.coeffs.shape[1:]

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def value(self):
        if self.ndim == 0:
            return float(self.coeffs[0])
        return np.array(self.coeffs[0])

    def __len__(self):
        return self.shape[0]

    def __iter__(self):
        for i in range(self.shape[0]):
            yield self[i]

    def __getitem__(self, key) -> "JetValue":
        if not isinstance(key, tuple):
            key = (key,)
        return JetValue(self.context, self.coeffs[(slice(None),) + key])

    def __repr__(self):
        return f"JetValue(order={self.order}, shape={self.shape}, value={self.value})"

    def transpose(self, *axes) -> "JetValue":
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        return JetValue(self.context, self.coeffs.transpose((0,) + tuple(a + 1 for a in axes)))

    @property
    def T(self) -> "JetValue":
        return self.transpose()

    def sum(self, axis=None) -> "JetValue":
        if axis is None:
            axis = tuple(range(self.ndim))
        elif isinstance(axis, int):
            axis = (axis,)
        axis = tuple((a % self.ndim) + 1 for a in axis)
        return JetValue(self.context, self.coeffs.sum(axis=axis))

    def trace(self, axis1: int = 0, axis2: int = 1) -> "JetValue":
        return JetValue(self.context, np.trace(self.coeffs, axis1=axis1 + 1, axis2=axis2 + 1))

    def truncate(self, order: int) -> "JetValue":
        if order >= self.order:
            return self
        context = self.context.lower(order)
        return JetValue(context, self.coeffs[:context.size])

    # calculus

    def diff(self, var: int) -> "JetValue":
        """Exact partial derivative; the result is one order lower."""
        if not 0 <= var < self.context.num_vars:
            raise JetError(f"Variable index {var} out of range for {self.context.num_vars} variables!")
        if self.order == 0:
            raise JetError("Insufficient jet order! The jet has no derivative information left.")
        source, factor = self.context.tables.derivative_table(var)
        coeffs = self.coeffs[source] * factor.reshape((-1,) + (1,) * self.ndim)
        return JetValue(self.context.lower(self.order - 1), coeffs)

    def partial(self, alpha) -> Union[float, np.ndarray]:
        alpha = np.asarray(alpha, dtype=np.int64)
        if alpha.shape != (self.context.num_vars,):
            raise JetError(f"Multi-index must have {self.context.num_vars} entries!")
        if alpha.sum() > self.order:
            raise JetError(f"Derivative of total order {int(alpha.sum())} requested from a jet of order {self.order}!")
        tables = self.context.tables
        r = int(tables.rank(alpha[None, :])[0])
        res = self.coeffs[r] * tables.factorials[r]
        return float(res) if self.ndim == 0 else np.array(res)

    def position_coefficients(self) -> np.ndarray:
        return np.array(self.coeffs[self.context.tables.position_mask])

    def position_multiplication_matrix(self) -> np.ndarray:
        """Matrix of u ↦ self·u on jets that depend on positions only."""
        if self.ndim:
            raise JetError("Multiplication matrices are only defined for scalar jets!")
        tables = self.context.tables
        mask = tables.position_mask
        left, right, target, _ = tables.product_table
        keep = mask[target]
        local = np.cumsum(mask) - 1
        size = int(mask.sum())
        matrix = np.zeros((size, size))
        np.add.at(matrix, (local[target[keep]], local[right[keep]]), self.coeffs[left[keep]])
        return matrix

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, JetValue):
            _check_compatible(self, other)
            order = min(self.order, other.order)
            return self.truncate(order), other.truncate(order)
        if isinstance(other, (Number, np.ndarray, np.generic, list, tuple)):
            return self, np.asarray(other, dtype=float)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if isinstance(b, JetValue):
            ndim = max(a.ndim, b.ndim)
            return JetValue(a.context, _pad(a.coeffs, ndim) + _pad(b.coeffs, ndim))
        shape = np.broadcast_shapes(a.shape, b.shape)
        coeffs = np.array(np.broadcast_to(_pad(a.coeffs, len(shape)), (a.context.size,) + shape))
        coeffs[0] += b
        return JetValue(a.context, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return JetValue(self.context, -self.coeffs)

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if isinstance(b, JetValue):
            return _multiply(a, b)
        ndim = max(a.ndim, b.ndim)
        return JetValue(a.context, _pad(a.coeffs, ndim) * b[np.newaxis, ...])

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if isinstance(b, JetValue):
            return a * b.reciprocal()
        if np.any(b == 0):
            raise JetError("Division of a jet by zero!")
        return a * (1.0 / b)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        return self.power(exponent)

    def reciprocal(self) -> "JetValue":
        b0 = self.coeffs[0]
        if np.any(b0 == 0):
            raise JetError("Division by a jet with vanishing constant term!")
        r = JetValue.constant(self.context, 1.0 / b0)
        for _ in range(newton_steps(self.order)):
            r = r * (2.0 - self * r)
        return r

    def sqrt(self) -> "JetValue":
        a0 = self.coeffs[0]
        if np.any(a0 <= 0):
            raise JetError(f"Square root of a jet with non-positive constant term! Constant term: {a0}.")
        r = JetValue.constant(self.context, 1.0 / np.sqrt(a0))
        for _ in range(newton_steps(self.order)):
            r = r * (3.0 - self * r * r) * 0.5
        return self * r

    def power(self, exponent) -> "JetValue":
        exponent = float(exponent)
        if exponent.is_integer():
            k = int(exponent)
            if k < 0:
                return self.reciprocal().power(-k)
            result = JetValue.constant(self.context, np.ones(self.shape))
            base = self
            while k:
                if k & 1:
                    result = result * base
                k >>= 1
                if k:
                    base = base * base
            return result
        a0 = self.coeffs[0]
        if np.any(a0 <= 0):
            raise JetError(f"Real power of a jet with non-positive constant term! Constant term: {a0}.")
        u = (self - a0) * (1.0 / a0)
        return _horner(u, [binom(exponent, k) for k in range(self.order + 1)]) * (a0 ** exponent)

    def exp(self) -> "JetValue":
        a0 = self.coeffs[0]
        u = self - a0
        return _horner(u, [1.0 / factorial(k) for k in range(self.order + 1)]) * np.exp(a0)

    def log(self) -> "JetValue":
        a0 = self.coeffs[0]
        if np.any(a0 <= 0):
            raise JetError(f"Logarithm of a jet with non-positive constant term! Constant term: {a0}.")
        u = (self - a0) * (1.0 / a0)
        series = [0.0] + [(-1.0) ** (k + 1) / k for k in range(1, self.order + 1)]
        return _horner(u, series) + np.log(a0)


def _check_compatible(a: JetValue, b: JetValue):
    if a.context.num_vars != b.context.num_vars:
        raise JetError(f"Jets from different contexts cannot be combined! {a.context.num_vars} variables vs"
                       f" {b.context.num_vars} variables.")


def _multiply(a: JetValue, b: JetValue) -> JetValue:
    left, right, _, offsets = a.context.tables.product_table
    ndim = max(a.ndim, b.ndim)
    terms = _pad(a.coeffs, ndim)[left] * _pad(b.coeffs, ndim)[right]
    return JetValue(a.context, np.add.reduceat(terms, offsets, axis=0))


def _horner(u: JetValue, series) -> JetValue:
    result = JetValue.constant(u.context, np.full(u.shape, series[-1]))
    for c in reversed(series[:-1]):
        result = result * u + c
    return result


def seed_variable(context: JetContext, index: int, value: float) -> JetValue:
    """Jet of the coordinate function v ↦ v_index at the base point."""
    if not 0 <= index < context.num_vars:
        raise JetError(f"Variable index {index} out of range for a context with {context.num_vars} variables!")
    coeffs = np.zeros(context.size)
    coeffs[0] = value
    if context.order >= 1:
        coeffs[1 + index] = 1.0
    return JetValue(context, coeffs)


def extract_partial(jet: JetValue, alpha) -> Union[float, np.ndarray]:
    return jet.partial(alpha)


def jet_arith(a: JetValue, b=None, op: str = "add"):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "sqrt":
        return a.sqrt()
    if op == "pow":
        return a.power(b)
    if op == "neg":
        return -a
    raise JetError(f"Unknown jet operation '{op}'!")


def einsum(subscripts: str, a, b) -> Union[JetValue, np.ndarray]:
    """Two-operand tensor contraction in the truncated algebra."""
    inputs, output = subscripts.replace(" ", "").split("->")
    sa, sb = inputs.split(",")
    if isinstance(a, JetValue) and isinstance(b, JetValue):
        _check_compatible(a, b)
        order = min(a.order, b.order)
        a, b = a.truncate(order), b.truncate(order)
        left, right, _, offsets = a.context.tables.product_table
        terms = np.einsum(f"p{sa},p{sb}->p{output}", a.coeffs[left], b.coeffs[right])
        return JetValue(a.context, np.add.reduceat(terms, offsets, axis=0))
    if isinstance(a, JetValue):
        return JetValue(a.context, np.einsum(f"p{sa},{sb}->p{output}", a.coeffs, np.asarray(b, dtype=float)))
    if isinstance(b, JetValue):
        return JetValue(b.context, np.einsum(f"{sa},p{sb}->p{output}", np.asarray(a, dtype=float), b.coeffs))
    return np.einsum(subscripts, a, b)


def sqrt(v):
    return v.sqrt() if isinstance(v, JetValue) else np.sqrt(v)


def exp(v):
    return v.exp() if isinstance(v, JetValue) else np.exp(v)


def log(v):
    return v.log() if isinstance(v, JetValue) else np.log(v)
