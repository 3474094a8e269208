"""Preconditioned Langevin Monte Carlo chains with seeded, schedule-independent replicates."""

from .export import config_from_meta, export_trajectory, load_trajectory, trajectory_meta
from .langevin import LangevinSampler, noise_stream, run_chain, run_replicates, step

__all__ = [
    "LangevinSampler",
    "config_from_meta",
    "export_trajectory",
    "load_trajectory",
    "noise_stream",
    "run_chain",
    "run_replicates",
    "step",
    "trajectory_meta",
]
