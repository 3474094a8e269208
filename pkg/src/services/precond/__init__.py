"""Preconditioners: fixed, AR(1) and spatially varying, with SPD utilities."""

from .diagnostics import beta_upper_limit, check_beta_condition, estimate_beta, uniform_ball
from .linalg import inv_spd, spectral_bounds, sqrt_spd
from .preconditioners import (
    AR1Preconditioner,
    FixedPreconditioner,
    SpatialPreconditioner,
    ar1_inverse,
    build_ar1,
    fixed_preconditioner,
    identity_preconditioner,
    tanh_scaled_preconditioner,
)
from .registry import build_precond

__all__ = [
    "AR1Preconditioner",
    "FixedPreconditioner",
    "SpatialPreconditioner",
    "ar1_inverse",
    "beta_upper_limit",
    "build_ar1",
    "build_precond",
    "check_beta_condition",
    "estimate_beta",
    "fixed_preconditioner",
    "identity_preconditioner",
    "inv_spd",
    "spectral_bounds",
    "sqrt_spd",
    "tanh_scaled_preconditioner",
    "uniform_ball",
]
