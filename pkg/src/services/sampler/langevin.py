import logging
import math
from typing import List, Optional

import numpy as np

from src.lib.error_handler import (
    DivergenceError,
    InfeasibilityError,
    InputError,
    ReplicateDivergenceError,
)
from src.lib.process_utils import run_indexed
from src.models.chain import ChainConfig, Trajectory
from src.models.preconditioner import Preconditioner
from src.models.target import TargetSpec
from src.services.theory.constants import problem_constants
from src.services.theory.ergodicity import gamma_interval

DIVERGENCE_LIMIT = 1e12
NOISE_BLOCK = 4096


def noise_stream(seed: int, substream: Optional[int] = None) -> np.random.Generator:
    """
    Counter-based Philox stream. Replicate r draws from the child sequence
    with spawn key (r,), so its noise does not depend on scheduling.
    """
    if substream is None:
        sequence = np.random.SeedSequence(seed)
    else:
        sequence = np.random.SeedSequence(seed, spawn_key=(substream,))
    return np.random.Generator(np.random.Philox(sequence))


def step(
    x: np.ndarray,
    target: TargetSpec,
    precond: Preconditioner,
    gamma: float,
    noise: np.ndarray,
    index: int = 0,
) -> np.ndarray:
    """
    One preconditioned Langevin update
    x - gamma H(x) grad g(x) + sqrt(2 gamma) H(x)^{1/2} noise,
    with H and H^{1/2} taken at the current point.
    """
    grad = target.grad_g(x)
    x_next = x - gamma * (precond.at(x) @ grad) + math.sqrt(2.0 * gamma) * (
        precond.sqrt_at(x) @ noise
    )
    if not np.all(np.isfinite(x_next)) or np.max(np.abs(x_next)) > DIVERGENCE_LIMIT:
        raise DivergenceError(index)
    return x_next


class LangevinSampler:
    def __init__(self, target: TargetSpec, precond: Preconditioner):
        self.target = target
        self.precond = precond
        self.logger = logging.getLogger(__name__)

    def admissibility_warnings(self, gamma: float) -> List[str]:
        """Warnings for step sizes outside the interval where the drift factor is < 1."""
        try:
            pc = problem_constants(self.target, self.precond)
            lo, hi = gamma_interval(pc)
        except InfeasibilityError as e:
            return [f"no admissible step size for this pair: {e.message}"]
        if lo < gamma < hi:
            return []
        return [
            f"gamma={float(gamma)!r} lies outside the admissible interval ({float(lo)!r}, {float(hi)!r}); "
            "geometric ergodicity is not guaranteed"
        ]

    def run_chain(
        self,
        config: ChainConfig,
        substream: Optional[int] = None,
        track_grad_norms: bool = False,
    ) -> Trajectory:
        warnings = self.admissibility_warnings(config.gamma)
        for message in warnings:
            self.logger.warning(message)
        return self._simulate(config, substream, warnings, track_grad_norms)

    def run_replicates(
        self,
        config: ChainConfig,
        n_rep: int,
        workers: int = 1,
        track_grad_norms: bool = False,
    ) -> List[Trajectory]:
        """
        n_rep independent chains; replicate r uses substream r. Any divergence is
        reported together with the indices of all failing replicates.
        """
        if n_rep < 1:
            raise InputError(f"n_rep must be >= 1, got {n_rep}")
        if workers < 1:
            raise InputError(f"workers must be >= 1, got {workers}")
        warnings = self.admissibility_warnings(config.gamma)
        for message in warnings:
            self.logger.warning(message)
        self.logger.info(
            f"Running {n_rep} replicates of K={config.K} on {self.target.identifier} "
            f"with {workers} worker(s)"
        )
        outcomes = run_indexed(
            lambda r: self._simulate(config, r, warnings, track_grad_norms),
            range(n_rep),
            workers=workers,
        )
        failures = []
        trajectories = []
        for index, result, ok in outcomes:
            if ok:
                trajectories.append(result)
            elif isinstance(result, DivergenceError):
                failures.append(DivergenceError(result.step, replicate=index))
            else:
                raise result
        if failures:
            raise ReplicateDivergenceError(failures)
        return trajectories

    def _simulate(
        self,
        config: ChainConfig,
        substream: Optional[int],
        warnings: List[str],
        track_grad_norms: bool,
    ) -> Trajectory:
        p = self.target.dimension
        if config.x0.size != p:
            raise InputError(f"x0 has dimension {config.x0.size}, target has {p}")
        rng = noise_stream(config.seed, substream)
        samples = np.empty((config.n_recorded, p))
        steps = config.burn_in + config.record_every * np.arange(1, config.n_recorded + 1)
        grad_norms = np.empty(config.n_recorded) if track_grad_norms else None

        x = config.x0.copy()
        row = 0
        block = np.empty((0, p))
        for k in range(1, config.K + 1):
            offset = (k - 1) % NOISE_BLOCK
            if offset == 0:
                # one (n, p) draw yields the same normals as n draws of size p
                block = rng.standard_normal((min(NOISE_BLOCK, config.K - k + 1), p))
            try:
                x = step(x, self.target, self.precond, config.gamma, block[offset], k)
            except DivergenceError:
                self.logger.warning(
                    f"Chain on {self.target.identifier} diverged at step {k} "
                    f"(gamma={config.gamma!r})"
                )
                raise
            if k > config.burn_in and (k - config.burn_in) % config.record_every == 0:
                samples[row] = x
                if grad_norms is not None:
                    grad_norms[row] = np.linalg.norm(self.target.grad_g(x))
                row += 1

        self.logger.debug(
            f"Chain finished: K={config.K}, recorded={row}, substream={substream}"
        )
        return Trajectory(
            samples=samples,
            steps=steps,
            config=config,
            terminal_state=x,
            target_id=self.target.identifier,
            precond_id=self.precond.identifier,
            replicate=substream,
            grad_norms=grad_norms,
            warnings=list(warnings),
        )


def run_chain(
    target: TargetSpec,
    precond: Preconditioner,
    config: ChainConfig,
    substream: Optional[int] = None,
) -> Trajectory:
    return LangevinSampler(target, precond).run_chain(config, substream)


def run_replicates(
    target: TargetSpec,
    precond: Preconditioner,
    config: ChainConfig,
    n_rep: int,
    workers: int = 1,
) -> List[Trajectory]:
    return LangevinSampler(target, precond).run_replicates(config, n_rep, workers)
