"""Strongly convex targets with analytic gradients and convexity constants."""

from .builtin import (
    GaussianCosineTarget,
    LogisticPathTarget,
    MixtureGaussianTarget,
    QuadraticTarget,
)
from .operations import eval_gradient, eval_hessian, eval_potential, find_minimizer
from .registry import TARGET_KINDS, build_target, load_logistic_target, parse_target_id

__all__ = [
    "GaussianCosineTarget",
    "LogisticPathTarget",
    "MixtureGaussianTarget",
    "QuadraticTarget",
    "TARGET_KINDS",
    "build_target",
    "eval_gradient",
    "eval_hessian",
    "eval_potential",
    "find_minimizer",
    "load_logistic_target",
    "parse_target_id",
]
