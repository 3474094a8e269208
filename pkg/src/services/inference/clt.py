"""
Central-limit inference from chain output: spatial averages, batch-means
asymptotic variance, projection confidence intervals and a KS normality check.
"""

import logging
import math
from typing import Callable, Sequence, Union

import numpy as np
from scipy import stats

from src.lib.error_handler import InputError
from src.models.chain import Trajectory
from src.models.inference import NormalityResult, ProjectionCI

logger = logging.getLogger(__name__)

DEFAULT_BATCHES = 30
MIN_REPLICATES = 100
# asymptotic 5% critical value of the one-sample KS statistic, times sqrt(n)
KS_CRITICAL_5PCT = 1.36
UNIT_TOL = 1e-10

Samples = Union[Trajectory, np.ndarray]


def _samples(source: Samples) -> np.ndarray:
    samples = source.samples if isinstance(source, Trajectory) else np.asarray(source, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.shape[0] == 0:
        raise InputError("trajectory is empty")
    return samples


def _evaluate(source: Samples, f: Callable[[np.ndarray], float]) -> np.ndarray:
    return np.array([f(row) for row in _samples(source)], dtype=float)


def spatial_average(source: Samples, f: Callable[[np.ndarray], float]) -> float:
    """(1/k) sum of f over the recorded iterates."""
    return float(np.mean(_evaluate(source, f)))


def batch_means(values: np.ndarray, n_batches: int = DEFAULT_BATCHES) -> np.ndarray:
    """Means of n_batches consecutive batches of size floor(k / n_batches); the remainder is dropped."""
    values = np.asarray(values, dtype=float).reshape(-1)
    if n_batches < 2:
        raise InputError(f"n_batches must be >= 2, got {n_batches}")
    if values.size < 2 * n_batches:
        raise InputError(
            f"need at least 2 * n_batches = {2 * n_batches} samples, got {values.size}"
        )
    size = values.size // n_batches
    return values[: size * n_batches].reshape(n_batches, size).mean(axis=1)


def sigma_from_values(values: np.ndarray, n_batches: int = DEFAULT_BATCHES) -> float:
    means = batch_means(values, n_batches)
    size = np.asarray(values).size // n_batches
    return math.sqrt(size * float(np.var(means, ddof=1)))


def batch_means_sigma(
    source: Samples, f: Callable[[np.ndarray], float], n_batches: int = DEFAULT_BATCHES
) -> float:
    """Non-overlapping batch-means estimate of the asymptotic standard deviation of f."""
    return sigma_from_values(_evaluate(source, f), n_batches)


def projection_values(
    source: Samples, u: np.ndarray, x_star: np.ndarray, M_H: float
) -> np.ndarray:
    """f(x) = M_H^{-1/2} <u, x - x*> for every recorded iterate."""
    samples = _samples(source)
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.size != samples.shape[1]:
        raise InputError(f"u has dimension {u.size}, trajectory has {samples.shape[1]}")
    norm = float(np.linalg.norm(u))
    if abs(norm - 1.0) > UNIT_TOL:
        raise InputError(f"projection direction must have unit norm, got |u|={norm!r}")
    return (samples - np.asarray(x_star, dtype=float)) @ u / math.sqrt(M_H)


def projection_ci(
    source: Samples,
    u: np.ndarray,
    x_star: np.ndarray,
    M_H: float,
    level: float = 0.95,
    n_batches: int = DEFAULT_BATCHES,
) -> ProjectionCI:
    """
    Confidence interval for M_H^{-1/2} times the stationary mean of <u, x - x*>.
    The center is the chain's spatial average, so the estimand is the mean under
    the step-size-dependent stationary law, not the mode.
    """
    if not 0.0 < level < 1.0:
        raise InputError(f"level must lie in (0, 1), got {level}")
    values = projection_values(source, u, x_star, M_H)
    k = values.size
    sigma_hat = sigma_from_values(values, n_batches)
    center = float(np.mean(values))
    half = float(stats.norm.ppf(0.5 * (1.0 + level))) * sigma_hat / math.sqrt(k)
    degenerate = sigma_hat == 0.0
    if degenerate:
        logger.warning("Batch-means variance is 0; the interval has zero width")
    return ProjectionCI(
        u=np.asarray(u, dtype=float).reshape(-1),
        point_estimate=center,
        sigma_hat=sigma_hat,
        level=level,
        interval=(center - half, center + half),
        half_width=half,
        k=k,
        n_batches=n_batches,
        degenerate=degenerate,
    )


def replicate_projection_averages(
    trajectories: Sequence[Samples], u: np.ndarray, x_star: np.ndarray, M_H: float
) -> np.ndarray:
    return np.array(
        [float(np.mean(projection_values(t, u, x_star, M_H))) for t in trajectories]
    )


def normality_diagnostic(replicate_averages: Sequence[float]) -> NormalityResult:
    """
    One-sample KS test of the standardized replicate averages against N(0, 1);
    passes when the statistic is below the asymptotic 5% critical value 1.36 / sqrt(n).
    """
    values = np.asarray(replicate_averages, dtype=float).reshape(-1)
    n = values.size
    if n < MIN_REPLICATES:
        raise InputError(f"need at least {MIN_REPLICATES} replicate averages, got {n}")
    sd = float(np.std(values, ddof=1))
    if sd == 0.0:
        raise InputError("replicate averages are constant; cannot standardize")
    z = (values - values.mean()) / sd
    statistic = float(stats.kstest(z, "norm").statistic)
    critical = KS_CRITICAL_5PCT / math.sqrt(n)
    return NormalityResult(
        ks_statistic=statistic, critical_value=critical, passed=statistic < critical, n=n
    )
