"""Explicit ergodicity constants and Wasserstein sampling plans."""

from .constants import problem_constants
from .ergodicity import (
    ErgodicityAnalyzer,
    ball_volume,
    drift_constants,
    drift_expectation,
    drift_factor,
    drift_lyapunov,
    ergodicity_report,
    estimate_mu_leb,
    eta_lower_bound,
    gamma_interval,
    in_gamma_interval,
    log_eta_lower_bound,
    rho_bound,
    rho_grid_search,
    small_set_radius,
    tv_bound,
)
from .sampling_plan import (
    continuous_w2_bound,
    exponential_moment_bound,
    kl_discretization_bound,
    plan_sampling,
    w2_discretization_bound,
)

__all__ = [
    "ErgodicityAnalyzer",
    "ball_volume",
    "continuous_w2_bound",
    "drift_constants",
    "drift_expectation",
    "drift_factor",
    "drift_lyapunov",
    "ergodicity_report",
    "estimate_mu_leb",
    "eta_lower_bound",
    "exponential_moment_bound",
    "gamma_interval",
    "in_gamma_interval",
    "kl_discretization_bound",
    "log_eta_lower_bound",
    "plan_sampling",
    "problem_constants",
    "rho_bound",
    "rho_grid_search",
    "small_set_radius",
    "tv_bound",
    "w2_discretization_bound",
]
