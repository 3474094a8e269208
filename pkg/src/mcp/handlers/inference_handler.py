from typing import List, Optional

import numpy as np

from src.lib.error_handler import InputError
from src.services.inference import projection_ci
from src.services.precond import build_precond
from src.services.sampler import load_trajectory
from src.services.targets import parse_target_id


class InferenceHandler:
    async def projection_interval(
        self,
        u: List[float],
        samples: Optional[List[List[float]]] = None,
        trajectory: Optional[str] = None,
        x_star: Optional[List[float]] = None,
        M_H: Optional[float] = None,
        level: float = 0.95,
        n_batches: int = 30,
    ) -> dict:
        """
        Handles the projection_interval tool call. Samples come inline or from a
        trajectory CSV, whose sidecar supplies x_star and M_H when omitted.
        """
        meta = {}
        if trajectory is not None:
            _, data, meta = load_trajectory(trajectory)
        elif samples is not None:
            data = np.asarray(samples, dtype=float)
        else:
            raise InputError("either samples or trajectory is required")
        if x_star is None:
            if "target" not in meta:
                raise InputError("x_star is required without a trajectory sidecar")
            x_star = parse_target_id(meta["target"]).x_star
        x_star = np.asarray(x_star, dtype=float)
        if M_H is None:
            if "precond" not in meta:
                raise InputError("M_H is required without a trajectory sidecar")
            M_H = build_precond(meta["precond"], x_star.size).M_H
        ci = projection_ci(data, np.asarray(u, dtype=float), x_star, float(M_H), level, int(n_batches))
        return {
            "point_estimate": ci.point_estimate,
            "sigma_hat": ci.sigma_hat,
            "level": ci.level,
            "interval": list(ci.interval),
            "half_width": ci.half_width,
            "k": ci.k,
            "n_batches": ci.n_batches,
            "degenerate": ci.degenerate,
            "estimand": ci.estimand,
        }
