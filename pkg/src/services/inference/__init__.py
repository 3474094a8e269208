from .clt import (
    batch_means,
    batch_means_sigma,
    normality_diagnostic,
    projection_ci,
    projection_values,
    replicate_projection_averages,
    sigma_from_values,
    spatial_average,
)

__all__ = [
    "batch_means",
    "batch_means_sigma",
    "normality_diagnostic",
    "projection_ci",
    "projection_values",
    "replicate_projection_averages",
    "sigma_from_values",
    "spatial_average",
]
