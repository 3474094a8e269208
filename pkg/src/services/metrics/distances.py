"""
Distances between sample sets and Gaussian laws, plus the exact laws of the
linear-Gaussian chain used as oracles for the sampler.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from src.lib.error_handler import ConvergenceError, InputError, InstabilityError
from src.services.precond.linalg import sqrt_spd

logger = logging.getLogger(__name__)

LYAPUNOV_TOL = 1e-12


def _sample(a: Sequence[float], name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.size == 0:
        raise InputError(f"sample {name} is empty")
    return a


def w2_empirical_1d(a: Sequence[float], b: Sequence[float]) -> float:
    """
    Exact W2 between two 1-D empirical measures via the monotone coupling.

    For unequal sizes the larger sample is thinned to the smaller size by taking
    evenly spaced order statistics.
    """
    a = np.sort(_sample(a, "a"))
    b = np.sort(_sample(b, "b"))
    if a.size != b.size:
        small, large = (a, b) if a.size < b.size else (b, a)
        logger.debug(f"Thinning sample of size {large.size} to {small.size} order statistics")
        idx = np.round(np.linspace(0, large.size - 1, small.size)).astype(int)
        a, b = small, large[idx]
    return float(np.sqrt(np.mean((a - b) ** 2)))


def w2_gaussian(
    m1: np.ndarray, S1: np.ndarray, m2: np.ndarray, S2: np.ndarray
) -> float:
    """sqrt(|m1 - m2|^2 + tr(S1 + S2 - 2 (S2^{1/2} S1 S2^{1/2})^{1/2}))."""
    m1 = np.atleast_1d(np.asarray(m1, dtype=float))
    m2 = np.atleast_1d(np.asarray(m2, dtype=float))
    S1 = np.atleast_2d(np.asarray(S1, dtype=float))
    S2 = np.atleast_2d(np.asarray(S2, dtype=float))
    p = m1.size
    if m2.size != p or S1.shape != (p, p) or S2.shape != (p, p):
        raise InputError(
            f"dimension mismatch: means {m1.size}/{m2.size}, covariances {S1.shape}/{S2.shape}"
        )
    root2 = sqrt_spd(S2)
    sqrt_spd(S1)  # validates S1
    middle = root2 @ S1 @ root2
    cross = sqrt_spd(0.5 * (middle + middle.T))
    bures = float(np.trace(S1) + np.trace(S2) - 2.0 * np.trace(cross))
    return math.sqrt(float(np.sum((m1 - m2) ** 2)) + max(bures, 0.0))


def chain_matrix(A: np.ndarray, H: np.ndarray, gamma: float) -> np.ndarray:
    """B = I - gamma H A, the linear part of the chain on a Gaussian target."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    H = np.atleast_2d(np.asarray(H, dtype=float))
    if A.shape != H.shape:
        raise InputError(f"A has shape {A.shape} but H has shape {H.shape}")
    return np.eye(A.shape[0]) - gamma * H @ A


def _check_stable(B: np.ndarray) -> float:
    radius = float(np.max(np.abs(np.linalg.eigvals(B))))
    if radius >= 1.0:
        raise InstabilityError(radius)
    return radius


def stationary_covariance_oracle(
    A: np.ndarray,
    H: np.ndarray,
    gamma: float,
    tol: float = LYAPUNOV_TOL,
    max_iter: int = 10_000_000,
) -> np.ndarray:
    """
    Solves Sigma = B Sigma B^T + 2 gamma H by fixed-point iteration from
    Sigma_0 = 2 gamma H, stopping once the Frobenius increment is <= tol.
    """
    B = chain_matrix(A, H, gamma)
    _check_stable(B)
    noise = 2.0 * gamma * np.atleast_2d(np.asarray(H, dtype=float))
    sigma = noise.copy()
    for iteration in range(max_iter):
        updated = B @ sigma @ B.T + noise
        increment = float(np.linalg.norm(updated - sigma))
        sigma = 0.5 * (updated + updated.T)
        if increment <= tol * max(1.0, float(np.linalg.norm(sigma))):
            logger.debug(f"Lyapunov fixed point reached in {iteration + 1} iterations")
            return sigma
    raise ConvergenceError(
        f"Lyapunov iteration did not settle in {max_iter} iterations", residual=increment
    )


def stationary_covariance_lyapunov(A: np.ndarray, H: np.ndarray, gamma: float) -> np.ndarray:
    """Same fixed point from a direct discrete Lyapunov solve; suited to tiny step sizes."""
    B = chain_matrix(A, H, gamma)
    _check_stable(B)
    sigma = linalg.solve_discrete_lyapunov(B, 2.0 * gamma * np.atleast_2d(np.asarray(H, dtype=float)))
    return 0.5 * (sigma + sigma.T)


def gaussian_chain_law(
    A: np.ndarray,
    H: np.ndarray,
    gamma: float,
    x0: np.ndarray,
    k: int,
    mean: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exact law N(mean_k, cov_k) of the chain on g(x) = (x - mean)^T A (x - mean) / 2
    after k steps from the point x0:
    mean_k = B^k (x0 - mean) + mean, cov_k = Sigma - B^k Sigma (B^k)^T.
    """
    if k < 0:
        raise InputError(f"k must be >= 0, got {k}")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    mean = np.zeros_like(x0) if mean is None else np.atleast_1d(np.asarray(mean, dtype=float))
    B = chain_matrix(A, H, gamma)
    sigma = stationary_covariance_lyapunov(A, H, gamma)
    Bk = np.linalg.matrix_power(B, int(k))
    cov = sigma - Bk @ sigma @ Bk.T
    return Bk @ (x0 - mean) + mean, 0.5 * (cov + cov.T)


def tv_histogram(
    a: Sequence[float],
    b: Sequence[float],
    bins: int = 50,
    value_range: Optional[Tuple[float, float]] = None,
) -> float:
    """1/2 sum |p_i - q_i| over shared histogram bins."""
    a = _sample(a, "a")
    b = _sample(b, "b")
    if bins < 2:
        raise InputError(f"bins must be >= 2, got {bins}")
    lo = float(min(a.min(), b.min()))
    hi = float(max(a.max(), b.max()))
    if value_range is None:
        value_range = (lo - 0.5, hi + 0.5) if lo == hi else (lo, hi)
    elif not value_range[0] <= lo <= hi <= value_range[1]:
        raise InputError(f"range {tuple(value_range)} does not cover both samples ([{lo!r}, {hi!r}])")
    p, _ = np.histogram(a, bins=bins, range=value_range)
    q, _ = np.histogram(b, bins=bins, range=value_range)
    return float(0.5 * np.sum(np.abs(p / a.size - q / b.size)))


def marginal_distances(
    samples_a: np.ndarray, samples_b: np.ndarray, bins: int = 50
) -> List[Tuple[int, float, float]]:
    """Rows (coord, w2, tv) per coordinate, coordinates numbered from 1."""
    samples_a = np.atleast_2d(np.asarray(samples_a, dtype=float))
    samples_b = np.atleast_2d(np.asarray(samples_b, dtype=float))
    if samples_a.shape[1] != samples_b.shape[1]:
        raise InputError(
            f"dimension mismatch: {samples_a.shape[1]} vs {samples_b.shape[1]} coordinates"
        )
    return [
        (
            j + 1,
            w2_empirical_1d(samples_a[:, j], samples_b[:, j]),
            tv_histogram(samples_a[:, j], samples_b[:, j], bins),
        )
        for j in range(samples_a.shape[1])
    ]
