from typing import Any, Dict, List, Optional

import numpy as np

from src.lib.target_loader import resolve_problem
from src.models.chain import ChainConfig
from src.services.sampler import LangevinSampler


class SamplingHandler:
    def __init__(self, preset_dir: str):
        self.preset_dir = preset_dir

    async def sample_chain(
        self,
        gamma: float,
        iters: int,
        preset: Optional[str] = None,
        target: Optional[str] = None,
        params: Optional[Dict[str, Any]] = None,
        precond: Optional[str] = None,
        seed: int = 0,
        x0: Optional[List[float]] = None,
        record_every: int = 1,
        burn_in: int = 0,
        replicates: int = 1,
        return_samples: bool = False,
    ) -> dict:
        """
        Handles the sample_chain tool call.
        """
        spec, H, _ = resolve_problem(preset, target, params, precond, self.preset_dir)
        config = ChainConfig(
            gamma=gamma,
            K=int(iters),
            x0=np.zeros(spec.dimension) if x0 is None else np.asarray(x0, dtype=float),
            seed=int(seed),
            record_every=int(record_every),
            burn_in=int(burn_in),
        )
        trajectories = LangevinSampler(spec, H).run_replicates(config, int(replicates))
        result = {
            "target": spec.identifier,
            "precond": H.identifier,
            "gamma": config.gamma,
            "K": config.K,
            "rows": trajectories[0].k,
            "replicates": len(trajectories),
            "means": [t.samples.mean(axis=0).tolist() for t in trajectories],
            "terminal_states": [t.terminal_state.tolist() for t in trajectories],
            "warnings": trajectories[0].warnings,
        }
        if return_samples:
            result["samples"] = [t.samples.tolist() for t in trajectories]
        return result
