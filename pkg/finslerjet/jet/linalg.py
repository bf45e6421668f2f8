import logging

import numpy as np

from finslerjet.general_utils.errors import JetError, SingularJetMatrixError
from finslerjet.jet.value import JetValue, einsum, newton_steps

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e13
RESIDUAL_LIMIT = 1e-8


def jet_inverse(matrix: JetValue) -> JetValue:
    """
    Inverse of a square jet matrix by the Newton iteration X <- X(2I - AX).

    Parameters:
    - matrix: JetValue of shape (n, n)

    Returns:
    - JetValue of shape (n, n)
    """
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise JetError(f"Only square jet matrices can be inverted! Got shape {matrix.shape}.")
    base = matrix.value
    cond = np.linalg.cond(base)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularJetMatrixError(f"The constant-term matrix is singular! Condition number: {cond:.3e}.")
    n = matrix.shape[0]
    identity = np.eye(n)
    inverse = JetValue.constant(matrix.context, np.linalg.inv(base))
    for _ in range(newton_steps(matrix.order)):
        inverse = einsum("ij,jk->ik", inverse, 2.0 * identity - einsum("ij,jk->ik", matrix, inverse))
    return inverse


def jet_linear_solve(matrix: JetValue, rhs: JetValue) -> JetValue:
    """Solve A·x = b in the truncated algebra; b may be a vector or a matrix of jets."""
    if not isinstance(rhs, JetValue):
        rhs = JetValue.constant(matrix.context, rhs)
    inverse = jet_inverse(matrix)
    pattern = "ij,j->i" if rhs.ndim == 1 else "ij,jk->ik"
    solution = einsum(pattern, inverse, rhs)
    residual = einsum(pattern, matrix, solution) - rhs
    scale = max(1.0, float(np.max(np.abs(rhs.coeffs))) if rhs.coeffs.size else 1.0)
    worst = float(np.max(np.abs(residual.coeffs))) if residual.coeffs.size else 0.0
    logger.debug("jet linear solve residual %.3e (scale %.3e)", worst, scale)
    if worst > RESIDUAL_LIMIT * scale * np.linalg.cond(matrix.value):
        raise SingularJetMatrixError(f"Jet linear solve did not reproduce the right-hand side! Residual: {worst:.3e}.")
    return solution
