from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.lib.error_handler import InputError


@dataclass(eq=False)
class ChainConfig:
    gamma: float
    K: int
    x0: np.ndarray
    seed: int
    record_every: int = 1
    burn_in: int = 0

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        self.gamma = float(self.gamma)
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise InputError(f"gamma must be > 0, got {self.gamma}")
        if self.K < 1:
            raise InputError(f"K must be >= 1, got {self.K}")
        if self.record_every < 1:
            raise InputError(f"record_every must be >= 1, got {self.record_every}")
        if not 0 <= self.burn_in < self.K:
            raise InputError(
                f"burn_in must satisfy 0 <= burn_in < K, got {self.burn_in} (K={self.K})"
            )
        if not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def n_recorded(self) -> int:
        return (self.K - self.burn_in) // self.record_every


@dataclass(eq=False)
class Trajectory:
    samples: np.ndarray
    steps: np.ndarray
    config: ChainConfig
    terminal_state: np.ndarray
    target_id: str
    precond_id: str
    replicate: Optional[int] = None
    grad_norms: Optional[np.ndarray] = None
    warnings: List[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return int(self.samples.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.samples.shape[1])
