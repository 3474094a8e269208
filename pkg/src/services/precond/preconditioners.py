import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import toeplitz

from src.lib.error_handler import DomainError, InputError
from src.services.precond.linalg import inv_spd, spectral_bounds, sqrt_spd

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FixedPreconditioner:
    H: np.ndarray
    m_H: float
    M_H: float
    kappa_star: float
    H_sqrt: np.ndarray
    H_inv: np.ndarray
    identifier: str

    @property
    def dimension(self) -> int:
        return int(self.H.shape[0])

    @property
    def beta(self) -> float:
        # a constant map never changes
        return 0.0

    @property
    def is_constant(self) -> bool:
        return True

    def at(self, x: np.ndarray) -> np.ndarray:
        return self.H

    def sqrt_at(self, x: np.ndarray) -> np.ndarray:
        return self.H_sqrt

    def inv_at(self, x: np.ndarray) -> np.ndarray:
        return self.H_inv


@dataclass(frozen=True, eq=False)
class AR1Preconditioner(FixedPreconditioner):
    rho: float


@dataclass(frozen=True, eq=False)
class SpatialPreconditioner:
    """
    A user-supplied map x -> H(x) with declared spectral bounds and beta.

    beta is declared, never inferred; see estimate_beta for a Monte-Carlo
    sanity check.
    """

    H_at: Callable[[np.ndarray], np.ndarray]
    m_H: float
    M_H: float
    beta: float
    dimension: int
    identifier: str

    def __post_init__(self):
        if not 0 < self.m_H <= self.M_H:
            raise DomainError(
                f"need 0 < m_H <= M_H, got m_H={self.m_H}, M_H={self.M_H}"
            )
        if self.beta < 0:
            raise DomainError(f"beta must be >= 0, got {self.beta}")

    @property
    def kappa_star(self) -> float:
        return self.m_H / self.M_H

    @property
    def is_constant(self) -> bool:
        return False

    def at(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.H_at(x), dtype=float)

    def sqrt_at(self, x: np.ndarray) -> np.ndarray:
        return sqrt_spd(self.at(x))

    def inv_at(self, x: np.ndarray) -> np.ndarray:
        return inv_spd(self.at(x))


def fixed_preconditioner(H: np.ndarray, identifier: str = "matrix") -> FixedPreconditioner:
    """Validates H and precomputes its bounds, square root and inverse."""
    H = np.atleast_2d(np.asarray(H, dtype=float))
    m_H, M_H, kappa_star = spectral_bounds(H)
    return FixedPreconditioner(
        H=0.5 * (H + H.T),
        m_H=m_H,
        M_H=M_H,
        kappa_star=kappa_star,
        H_sqrt=sqrt_spd(H),
        H_inv=inv_spd(H),
        identifier=identifier,
    )


def identity_preconditioner(p: int) -> FixedPreconditioner:
    if p < 1:
        raise InputError(f"dimension must be >= 1, got {p}")
    eye = np.eye(p)
    return FixedPreconditioner(
        H=eye,
        m_H=1.0,
        M_H=1.0,
        kappa_star=1.0,
        H_sqrt=eye.copy(),
        H_inv=eye.copy(),
        identifier="identity",
    )


def build_ar1(rho: float, p: int) -> AR1Preconditioner:
    """
    AR(1) correlation matrix with (i, j) entry rho^|i-j|.
    """
    if not -1.0 < rho < 1.0:
        raise DomainError(f"AR(1) coefficient must satisfy |rho| < 1, got {rho}")
    if p < 1:
        raise InputError(f"dimension must be >= 1, got {p}")
    H = toeplitz(rho ** np.arange(p, dtype=float))
    m_H, M_H, kappa_star = spectral_bounds(H)
    logger.debug(f"AR(1) rho={rho}, p={p}: m_H={m_H:.6g}, M_H={M_H:.6g}")
    return AR1Preconditioner(
        H=H,
        m_H=m_H,
        M_H=M_H,
        kappa_star=kappa_star,
        H_sqrt=sqrt_spd(H),
        H_inv=inv_spd(H),
        identifier=f"ar1:{float(rho)!r}",
        rho=float(rho),
    )


def ar1_inverse(rho: float, p: int) -> np.ndarray:
    """Closed-form tridiagonal inverse of the AR(1) correlation matrix."""
    if p == 1:
        return np.ones((1, 1))
    diag = np.full(p, 1.0 + rho**2)
    diag[0] = diag[-1] = 1.0
    inv = np.diag(diag) - rho * (np.eye(p, k=1) + np.eye(p, k=-1))
    return inv / (1.0 - rho**2)


def tanh_scaled_preconditioner(
    p: int, eps: float, base: float = 1.0
) -> SpatialPreconditioner:
    """
    H(x) = base * (1 + eps * tanh(x_1)) * I.

    H^-1 ranges over [1/(base(1+eps)), 1/(base(1-eps))] times I, so
    M_H * sup ||H^-1(x) - H^-1(y)||_2 = 2 eps / (1 - eps).
    """
    if not 0.0 <= eps < 1.0:
        raise DomainError(f"eps must lie in [0, 1), got {eps}")
    if base <= 0:
        raise DomainError(f"base scale must be > 0, got {base}")
    eye = np.eye(p)

    def H_at(x: np.ndarray) -> np.ndarray:
        return base * (1.0 + eps * np.tanh(x[0])) * eye

    return SpatialPreconditioner(
        H_at=H_at,
        m_H=base * (1.0 - eps),
        M_H=base * (1.0 + eps),
        beta=2.0 * eps / (1.0 - eps),
        dimension=p,
        identifier=f"tanh:{float(eps)!r}",
    )
