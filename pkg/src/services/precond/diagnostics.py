import logging
from typing import Optional

import numpy as np

from src.lib.error_handler import InfeasibilityError, InputError
from src.models.preconditioner import Preconditioner

logger = logging.getLogger(__name__)


def beta_upper_limit(m: float, M: float, m_H: float, M_H: float) -> float:
    """
    Supremum of admissible beta: q / (1 - q) with q = (m_H m)^2 / (M_H M)^2.

    Infinite when q = 1 (perfectly conditioned problem).
    """
    q = (m_H * m) ** 2 / (M_H * M) ** 2
    if q >= 1.0:
        return float("inf")
    return q / (1.0 - q)


def check_beta_condition(m: float, M: float, m_H: float, M_H: float, beta: float) -> None:
    """Raises InfeasibilityError unless beta < q / (1 - q)."""
    if beta == 0.0:
        return
    limit = beta_upper_limit(m, M, m_H, M_H)
    if not beta < limit:
        raise InfeasibilityError(
            "beta-condition",
            f"beta={beta:.6g} must be < (m_H^2 m^2)/(M_H^2 M^2) * "
            f"(1 - m_H^2 m^2/(M_H^2 M^2))^-1 = {limit:.6g}",
        )


def estimate_beta(
    precond: Preconditioner,
    n_pairs: int,
    radius: float,
    seed: int = 0,
    center: Optional[np.ndarray] = None,
) -> float:
    """
    Monte-Carlo lower estimate of sup M_H * ||H^-1(x) - H^-1(y)||_2 over pairs
    drawn uniformly from the ball of the given radius.

    A diagnostic against the declared beta, never a certificate.
    """
    if n_pairs < 1:
        raise InputError(f"n_pairs must be >= 1, got {n_pairs}")
    if precond.is_constant:
        return 0.0
    p = precond.dimension
    center = np.zeros(p) if center is None else np.asarray(center, dtype=float)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    points = center + uniform_ball(rng, 2 * n_pairs, p, radius)
    best = 0.0
    for i in range(n_pairs):
        diff = precond.inv_at(points[2 * i]) - precond.inv_at(points[2 * i + 1])
        best = max(best, float(np.linalg.norm(diff, ord=2)))
    estimate = precond.M_H * best
    logger.info(
        f"beta estimate {estimate:.6g} from {n_pairs} pairs (declared {precond.beta:.6g})"
    )
    return estimate


def uniform_ball(rng: np.random.Generator, n: int, p: int, radius: float) -> np.ndarray:
    """n points uniform in the p-dimensional centred ball of the given radius."""
    directions = rng.standard_normal((n, p))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.random(n) ** (1.0 / p)
    return directions * radii[:, None]
