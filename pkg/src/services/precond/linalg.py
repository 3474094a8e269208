from typing import Tuple

import numpy as np
from scipy import linalg

from src.lib.error_handler import DomainError

SYMMETRY_TOL = 1e-12


def _symmetric_eigh(A: np.ndarray, name: str = "matrix") -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of an SPD matrix after enforcing exact symmetry."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError(f"{name} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(A))))
    asym = float(np.max(np.abs(A - A.T))) if A.size else 0.0
    if asym > SYMMETRY_TOL * scale:
        raise DomainError(f"{name} is not symmetric (max |A - A^T| = {asym:.3e})")
    eigvals, eigvecs = linalg.eigh(0.5 * (A + A.T))
    if eigvals[0] <= 0:
        raise DomainError(
            f"{name} is not positive definite: smallest eigenvalue {eigvals[0]:.6g}"
        )
    return eigvals, eigvecs


def sqrt_spd(A: np.ndarray) -> np.ndarray:
    """
    Unique SPD square root B = Q diag(sqrt(lambda)) Q^T of an SPD matrix A.
    """
    eigvals, eigvecs = _symmetric_eigh(A)
    B = (eigvecs * np.sqrt(eigvals)) @ eigvecs.T
    return 0.5 * (B + B.T)


def inv_spd(A: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = _symmetric_eigh(A)
    inv = (eigvecs / eigvals) @ eigvecs.T
    return 0.5 * (inv + inv.T)


def spectral_bounds(A: np.ndarray) -> Tuple[float, float, float]:
    """Returns (m_H, M_H, kappa_star) = (lambda_min, lambda_max, lambda_min / lambda_max)."""
    eigvals, _ = _symmetric_eigh(A)
    m_H, M_H = float(eigvals[0]), float(eigvals[-1])
    return m_H, M_H, m_H / M_H
