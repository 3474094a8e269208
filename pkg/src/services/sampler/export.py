"""Trajectory CSV export with its key=value `.meta` sidecar, and the way back."""

import logging
from typing import Dict, Tuple

import numpy as np

from src.lib.error_handler import InputError
from src.lib.io import (
    meta_path,
    parse_vector,
    read_meta,
    read_trajectory_csv,
    write_trajectory_csv,
)
from src.models.chain import ChainConfig, Trajectory

logger = logging.getLogger(__name__)


def trajectory_meta(trajectory: Trajectory) -> Dict[str, object]:
    config = trajectory.config
    meta: Dict[str, object] = {
        "gamma": config.gamma,
        "K": config.K,
        "seed": config.seed,
        "record_every": config.record_every,
        "burn_in": config.burn_in,
        "x0": config.x0,
        "target": trajectory.target_id,
        "precond": trajectory.precond_id,
        "dimension": trajectory.dimension,
        "rows": trajectory.k,
    }
    if trajectory.replicate is not None:
        meta["replicate"] = trajectory.replicate
    return meta


def export_trajectory(trajectory: Trajectory, path: str) -> None:
    write_trajectory_csv(path, trajectory.steps, trajectory.samples, trajectory_meta(trajectory))
    logger.info(f"Wrote {trajectory.k} rows to {path}")


def config_from_meta(meta: Dict[str, str]) -> ChainConfig:
    try:
        return ChainConfig(
            gamma=float(meta["gamma"]),
            K=int(meta["K"]),
            x0=parse_vector(meta["x0"]),
            seed=int(meta["seed"]),
            record_every=int(meta.get("record_every", "1")),
            burn_in=int(meta.get("burn_in", "0")),
        )
    except KeyError as e:
        raise InputError(f"meta sidecar is missing {e}")
    except ValueError as e:
        raise InputError(f"malformed meta value: {e}")


def load_trajectory(path: str) -> Tuple[np.ndarray, np.ndarray, Dict[str, str]]:
    """
    Reads a trajectory CSV and its sidecar when present. Returns (steps, samples, meta);
    meta is empty for bare CSVs.
    """
    steps, samples = read_trajectory_csv(path)
    sidecar = meta_path(path)
    try:
        meta = read_meta(sidecar)
    except InputError:
        logger.debug(f"No meta sidecar next to {path}")
        meta = {}
    return steps, samples, meta
