import logging

import numpy as np

from src.lib.error_handler import ConvergenceError, InputError
from src.models.target import TargetSpec

logger = logging.getLogger(__name__)


def eval_potential(target: TargetSpec, x: np.ndarray) -> float:
    return target.g(x)


def eval_gradient(target: TargetSpec, x: np.ndarray) -> np.ndarray:
    return target.grad_g(x)


def eval_hessian(target: TargetSpec, x: np.ndarray) -> np.ndarray:
    return target.hess_g(x)


def find_minimizer(
    target: TargetSpec,
    tol: float = 1e-10,
    x0: np.ndarray = None,
    max_iter: int = 100_000,
) -> np.ndarray:
    """
    Gradient descent with step 1/M; m-strong convexity makes it contract
    linearly at rate (1 - m/M).
    """
    if tol <= 0:
        raise InputError(f"tol must be > 0, got {tol}")
    x = np.zeros(target.dimension) if x0 is None else np.asarray(x0, dtype=float).copy()
    step = 1.0 / target.M
    grad = target.grad_g(x)
    norm = float(np.linalg.norm(grad))
    for iteration in range(max_iter):
        if norm <= tol:
            logger.debug(
                f"Minimizer of {target.identifier} found in {iteration} iterations "
                f"(|grad| = {norm:.3e})"
            )
            return x
        x = x - step * grad
        grad = target.grad_g(x)
        norm = float(np.linalg.norm(grad))
    if norm <= tol:
        return x
    raise ConvergenceError(
        f"gradient descent on {target.identifier} did not reach |grad| <= {tol:g} "
        f"in {max_iter} iterations",
        residual=norm,
    )
