from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from src.lib.error_handler import DomainError


class KappaConvention(Enum):
    # kappa = 2 m m_H
    DOUBLED = "doubled"
    # kappa = m m_H, the longer horizon
    STANDARD = "standard"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            return _KAPPA_ALIASES.get(value.lower())
        return None


_KAPPA_ALIASES = {"text": KappaConvention.DOUBLED, "appendix": KappaConvention.STANDARD}

# every accepted spelling, canonical names first
KAPPA_CONVENTION_NAMES = [c.value for c in KappaConvention] + list(_KAPPA_ALIASES)


@dataclass(frozen=True)
class ProblemConstants:
    m: float
    M: float
    m_H: float
    M_H: float
    beta: float
    p: int
    kappa_convention: KappaConvention = KappaConvention.STANDARD

    def __post_init__(self):
        if not 0 < self.m <= self.M:
            raise DomainError(f"need 0 < m <= M, got m={self.m}, M={self.M}")
        if not 0 < self.m_H <= self.M_H:
            raise DomainError(
                f"need 0 < m_H <= M_H, got m_H={self.m_H}, M_H={self.M_H}"
            )
        if self.beta < 0:
            raise DomainError(f"beta must be >= 0, got {self.beta}")
        if self.p < 1:
            raise DomainError(f"dimension must be >= 1, got {self.p}")

    @property
    def kappa(self) -> float:
        if self.kappa_convention is KappaConvention.DOUBLED:
            return 2.0 * self.m * self.m_H
        return self.m * self.m_H

    @property
    def kappa_star(self) -> float:
        return self.m_H / self.M_H


@dataclass(frozen=True)
class MuLebEstimate:
    value: float
    standard_error: float
    accepted_fraction: float
    ball_volume: float
    n_samples: int
    degenerate: bool = False


@dataclass(frozen=True)
class RhoGridResult:
    r: float
    d: float
    rho: float
    # rows of (r, d, rho), r-major
    grid: np.ndarray


@dataclass(frozen=True)
class TvBound:
    raw: float
    clipped: float
    M_x: float
    k: int


@dataclass(frozen=True)
class ErgodicityReport:
    gamma: float
    lambda_tilde: float
    b: float
    b_tilde: float
    alpha: float
    small_set_radius: float
    gamma_interval: tuple
    eta: Optional[float] = None
    log_eta: Optional[float] = None
    r: Optional[float] = None
    d: Optional[float] = None
    rho: Optional[float] = None
    mu_leb_C: Optional[float] = None
    mu_leb_se: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    @property
    def small_set_level(self) -> float:
        """The level 2 b_tilde / (alpha - lambda_tilde) bounding V_tilde on C."""
        return 2.0 * self.b_tilde / (self.alpha - self.lambda_tilde)


@dataclass(frozen=True)
class SamplingPlan:
    epsilon: float
    T: float
    C_star: float
    C_const: float
    gamma_max: float
    gamma: float
    K: int
    alpha_exp: float
    kappa: float
    kappa_star: float
    x0: np.ndarray
    log_E_L0: float
    # log(E(L0) + alpha |grad g(0)|^2 T / (2m - 4 alpha / m_H))
    log_moment_term: float
    degenerate: bool = False
    notes: List[str] = field(default_factory=list)
