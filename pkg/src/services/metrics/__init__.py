from .distances import (
    chain_matrix,
    gaussian_chain_law,
    marginal_distances,
    stationary_covariance_lyapunov,
    stationary_covariance_oracle,
    tv_histogram,
    w2_empirical_1d,
    w2_gaussian,
)

__all__ = [
    "chain_matrix",
    "gaussian_chain_law",
    "marginal_distances",
    "stationary_covariance_lyapunov",
    "stationary_covariance_oracle",
    "tv_histogram",
    "w2_empirical_1d",
    "w2_gaussian",
]
