import logging
from functools import cached_property

import numpy as np

from finslerjet.general_utils.errors import DomainError, JetError
from finslerjet.general_utils.sampling import TangentPoint
from finslerjet.jet import JetContext, JetValue, seed_variable, einsum, jet_inverse

logger = logging.getLogger(__name__)

_AXES = "abcdefgh"


class TangentJets:
    """
    Jets of every curvature quantity at one tangent point.

    F is expanded to ``order`` in the 2n variables (x, y); each derived
    quantity loses one order per derivative, so g and G carry order - 2,
    R carries order - 4, the hh-curvature order - 6. Quantities are computed
    lazily and cached.
    """

    def __init__(self, metric, point: TangentPoint, order: int):
        self.metric = metric
        self.point = point
        self.n = metric.dimension
        if point.dimension != self.n:
            raise DomainError(f"Tangent point of dimension {point.dimension} given to a metric of dimension {self.n}!")
        metric.require(point.x)
        self.order = order
        self.context = JetContext(2 * self.n, order)
        self.X = [seed_variable(self.context, i, point.x[i]) for i in range(self.n)]
        self.Y = [seed_variable(self.context, self.n + i, point.y[i]) for i in range(self.n)]

    # derivative helpers

    def grad_x(self, jet: JetValue) -> JetValue:
        return JetValue.stack([jet.diff(i) for i in range(self.n)], axis=-1)

    def grad_y(self, jet: JetValue) -> JetValue:
        return JetValue.stack([jet.diff(self.n + i) for i in range(self.n)], axis=-1)

    def covariant(self, tensor: JetValue, signature: str = "") -> JetValue:
        """
        Horizontal covariant derivative of the Berwald connection.

        ``signature`` lists 'u' or 'l' for each tensor axis (upper or lower
        index). The derivative index is appended as the last axis.
        """
        if len(signature) != tensor.ndim:
            raise JetError(f"Index signature '{signature}' does not match a tensor of rank {tensor.ndim}!")
        axes = _AXES[:tensor.ndim]
        delta = self.grad_x(tensor) - einsum(f"{axes}m,mz->{axes}z", self.grad_y(tensor), self.N)
        for pos, kind in enumerate(signature):
            replaced = axes[:pos] + "y" + axes[pos + 1:]
            if kind == "u":
                delta = delta + einsum(f"{axes[pos]}yz,{replaced}->{axes}z", self.Gamma, tensor)
            elif kind == "l":
                delta = delta - einsum(f"y{axes[pos]}z,{replaced}->{axes}z", self.Gamma, tensor)
            else:
                raise JetError(f"Unknown index kind '{kind}' in signature '{signature}'!")
        return delta

    def covariant0(self, tensor: JetValue, signature: str = "") -> JetValue:
        axes = _AXES[:tensor.ndim]
        return einsum(f"{axes}z,z->{axes}", self.covariant(tensor, signature), self.y)

    def contract_y(self, tensor: JetValue) -> JetValue:
        axes = _AXES[:tensor.ndim - 1]
        return einsum(f"{axes}z,z->{axes}", tensor, self.y)

    # metric

    @cached_property
    def y(self) -> JetValue:
        return JetValue.stack(self.Y)

    @cached_property
    def F(self) -> JetValue:
        value = self.metric.evaluate(self.X, self.Y)
        if not isinstance(value, JetValue):
            value = JetValue.constant(self.context, value)
        if not value.value > 0:
            raise DomainError(f"F must be positive at a nonzero direction! F = {value.value} at {self.point}.")
        return value

    @cached_property
    def F2(self) -> JetValue:
        return self.F * self.F

    @cached_property
    def Fy(self) -> JetValue:
        return self.grad_y(self.F)

    @cached_property
    def Fx(self) -> JetValue:
        return self.grad_x(self.F)

    @cached_property
    def g(self) -> JetValue:
        g = 0.5 * self.grad_y(self.grad_y(self.F2))
        eigenvalues = np.linalg.eigvalsh(0.5 * (g.value + g.value.T))
        if eigenvalues[0] <= 0:
            raise DomainError(f"The fundamental tensor is not positive definite at x = {self.point.x.tolist()},"
                              f" y = {self.point.y.tolist()}! Eigenvalues: {eigenvalues.tolist()}.")
        return g

    @cached_property
    def g_inv(self) -> JetValue:
        return jet_inverse(self.g)

    @cached_property
    def h(self) -> JetValue:
        """Angular metric h_jk = g_jk - F_j F_k."""
        return self.g - self.Fy[:, None] * self.Fy[None, :]

    @cached_property
    def h_mixed(self) -> JetValue:
        """h^i_k = δ^i_k - F_k y^i / F."""
        return np.eye(self.n) - self.y[:, None] * self.Fy[None, :] / self.F

    # spray

    @cached_property
    def G(self) -> JetValue:
        F2x = self.grad_x(self.F2)
        mixed = self.grad_y(F2x)
        bracket = einsum("ml,m->l", mixed, self.y) - F2x
        return 0.25 * einsum("il,l->i", self.g_inv, bracket)

    @cached_property
    def N(self) -> JetValue:
        return self.grad_y(self.G)

    @cached_property
    def Gamma(self) -> JetValue:
        return self.grad_y(self.N)

    @cached_property
    def B(self) -> JetValue:
        return self.grad_y(self.Gamma)

    # curvature

    @cached_property
    def R(self) -> JetValue:
        Gx = self.grad_x(self.G)
        Nx = self.grad_x(self.N)
        return (2.0 * Gx
                - einsum("ikl,l->ik", Nx, self.y)
                + 2.0 * einsum("l,ilk->ik", self.G, self.Gamma)
                - einsum("il,lk->ik", self.N, self.N))

    @cached_property
    def K(self) -> JetValue:
        """Scalar flag curvature fitted from the trace, R^m_m / ((n-1)F²)."""
        return self.R.trace() / ((self.n - 1) * self.F2)

    @cached_property
    def R_scalar_flag(self) -> JetValue:
        return self.K * self.F2 * self.h_mixed

    @cached_property
    def R3(self) -> JetValue:
        """R^l_ij, indexed [l, i, j]."""
        dR = self.grad_y(self.R)
        return (dR - dR.transpose(0, 2, 1)) * (1.0 / 3.0)

    @cached_property
    def R4(self) -> JetValue:
        """hh-curvature R_m^l_ij, indexed [m, l, i, j]."""
        return self.grad_y(self.R3).transpose(3, 0, 1, 2)

    # non-Riemannian quantities

    @cached_property
    def C(self) -> JetValue:
        """Cartan torsion ½ ∂g_ij/∂y^k."""
        return 0.5 * self.grad_y(self.g)

    @cached_property
    def I(self) -> JetValue:
        return einsum("ij,ijk->k", self.g_inv, self.C)

    @cached_property
    def L(self) -> JetValue:
        yg = einsum("m,ml->l", self.y, self.g)
        return -0.5 * einsum("l,lijk->ijk", yg, self.B)

    @cached_property
    def J(self) -> JetValue:
        return einsum("ij,ijk->k", self.g_inv, self.L)

    # projective quantities

    @cached_property
    def P(self) -> JetValue:
        """Projective factor F_{x^k} y^k / (2F)."""
        return einsum("k,k->", self.Fx, self.y) / (2.0 * self.F)

    @cached_property
    def K_projective(self) -> JetValue:
        Px = self.grad_x(self.P)
        return (self.P * self.P - einsum("m,m->", Px, self.y)) / self.F2

    @cached_property
    def hamel(self) -> JetValue:
        mixed = self.grad_y(self.Fx)
        return mixed - mixed.transpose(1, 0)
