from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class ProjectionCI:
    u: np.ndarray
    point_estimate: float
    sigma_hat: float
    level: float
    # point_estimate -+ half_width, equal up to rounding of the two sums
    interval: Tuple[float, float]
    half_width: float
    k: int
    n_batches: int
    degenerate: bool = False
    estimand: str = "M_H^(-1/2) * integral of <u, v - x_star> under the step-size-dependent stationary law"


@dataclass(frozen=True)
class NormalityResult:
    ks_statistic: float
    critical_value: float
    passed: bool
    n: int
