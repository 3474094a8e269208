import math

import numpy as np
import pytest

from src.lib.error_handler import DivergenceError, InputError, ReplicateDivergenceError
from src.models.chain import ChainConfig
from src.services.precond import build_ar1, identity_preconditioner, tanh_scaled_preconditioner
from src.services.sampler import (
    LangevinSampler,
    config_from_meta,
    export_trajectory,
    load_trajectory,
    noise_stream,
    run_chain,
    run_replicates,
    step,
)
from src.services.targets import GaussianCosineTarget, MixtureGaussianTarget, QuadraticTarget


@pytest.fixture
def mixture():
    return MixtureGaussianTarget(a=np.array([0.5, 0.0, 0.0]))


@pytest.fixture
def ar1():
    return build_ar1(0.5, 3)


@pytest.fixture
def config():
    return ChainConfig(gamma=0.1, K=500, x0=np.zeros(3), seed=42)


def test_step_follows_the_update_rule(mixture, ar1):
    x = np.array([0.3, -0.2, 0.1])
    noise = np.array([1.0, -0.5, 0.25])
    gamma = 0.1
    expected = x - gamma * ar1.H @ mixture.grad_g(x) + math.sqrt(2 * gamma) * ar1.H_sqrt @ noise
    assert np.allclose(step(x, mixture, ar1, gamma, noise), expected)


def test_step_uses_h_at_the_current_point():
    target = QuadraticTarget(A=np.eye(2), mean=np.zeros(2))
    H = tanh_scaled_preconditioner(2, 0.5)
    x = np.array([1.0, 2.0])
    Hx = H.at(x)
    expected = x - 0.05 * Hx @ x + math.sqrt(0.1) * H.sqrt_at(x) @ np.ones(2)
    assert np.allclose(step(x, target, H, 0.05, np.ones(2)), expected)


def test_step_flags_divergence(mixture, ar1):
    with pytest.raises(DivergenceError) as exc:
        step(np.full(3, 1e12), mixture, ar1, 10.0, np.zeros(3), index=17)
    assert exc.value.step == 17
    assert exc.value.exit_code == 3


def test_chains_are_reproducible(mixture, ar1, config):
    first = run_chain(mixture, ar1, config)
    second = run_chain(mixture, ar1, config)
    assert np.array_equal(first.samples, second.samples)
    other = run_chain(mixture, ar1, ChainConfig(gamma=0.1, K=500, x0=np.zeros(3), seed=43))
    assert not np.array_equal(first.samples, other.samples)


def test_first_step_uses_first_noise_draw(mixture, ar1):
    config = ChainConfig(gamma=0.1, K=1, x0=np.zeros(3), seed=5)
    noise = noise_stream(5).standard_normal(3)
    expected = step(np.zeros(3), mixture, ar1, 0.1, noise)
    assert np.array_equal(run_chain(mixture, ar1, config).samples[0], expected)


def test_noise_blocks_match_single_draws():
    rng = noise_stream(9)
    block = rng.standard_normal((5000, 2))
    rng = noise_stream(9)
    singles = np.array([rng.standard_normal(2) for _ in range(5000)])
    assert np.array_equal(block, singles)


def test_recording_schedule(mixture, ar1):
    config = ChainConfig(gamma=0.1, K=100, x0=np.zeros(3), seed=1, record_every=7, burn_in=10)
    traj = run_chain(mixture, ar1, config)
    assert traj.k == (100 - 10) // 7
    assert traj.steps[0] == 17
    assert np.all(np.diff(traj.steps) == 7)
    full = run_chain(mixture, ar1, ChainConfig(gamma=0.1, K=100, x0=np.zeros(3), seed=1))
    assert np.array_equal(traj.samples, full.samples[traj.steps - 1])


def test_chain_config_validation():
    with pytest.raises(InputError):
        ChainConfig(gamma=0.0, K=10, x0=np.zeros(2), seed=0)
    with pytest.raises(InputError):
        ChainConfig(gamma=0.1, K=0, x0=np.zeros(2), seed=0)
    with pytest.raises(InputError):
        ChainConfig(gamma=0.1, K=10, x0=np.zeros(2), seed=0, burn_in=10)
    with pytest.raises(InputError):
        ChainConfig(gamma=0.1, K=10, x0=np.zeros(2), seed=-1)


def test_x0_dimension_mismatch(mixture, ar1):
    with pytest.raises(InputError):
        run_chain(mixture, ar1, ChainConfig(gamma=0.1, K=10, x0=np.zeros(2), seed=0))


def test_replicates_use_independent_substreams(mixture, ar1, config):
    trajectories = run_replicates(mixture, ar1, config, 3)
    assert [t.replicate for t in trajectories] == [0, 1, 2]
    assert not np.array_equal(trajectories[0].samples, trajectories[1].samples)
    again = LangevinSampler(mixture, ar1).run_chain(config, substream=1)
    assert np.array_equal(trajectories[1].samples, again.samples)


def test_replicates_do_not_depend_on_workers(mixture, ar1, config):
    serial = run_replicates(mixture, ar1, config, 4, workers=1)
    parallel = run_replicates(mixture, ar1, config, 4, workers=3)
    for a, b in zip(serial, parallel):
        assert np.array_equal(a.samples, b.samples)


def test_replicate_argument_checks(mixture, ar1, config):
    with pytest.raises(InputError):
        run_replicates(mixture, ar1, config, 0)
    with pytest.raises(InputError):
        run_replicates(mixture, ar1, config, 2, workers=0)


def test_divergent_replicates_are_all_reported():
    target = QuadraticTarget(A=np.diag([1.0, 100.0]), mean=np.zeros(2))
    config = ChainConfig(gamma=0.5, K=2000, x0=np.ones(2), seed=0)
    with pytest.raises(ReplicateDivergenceError) as exc:
        run_replicates(target, identity_preconditioner(2), config, 3)
    assert exc.value.replicates == [0, 1, 2]
    assert exc.value.exit_code == 3


def test_out_of_interval_step_size_warns(mixture, ar1):
    sampler = LangevinSampler(mixture, ar1)
    assert sampler.admissibility_warnings(0.1) == []
    warnings = sampler.admissibility_warnings(0.6)
    assert len(warnings) == 1 and "outside the admissible interval" in warnings[0]
    traj = sampler.run_chain(ChainConfig(gamma=0.6, K=50, x0=np.zeros(3), seed=0))
    assert traj.warnings == warnings


def test_infeasible_pair_still_samples():
    target = GaussianCosineTarget(lambda1=0.9, dim=2)
    H = tanh_scaled_preconditioner(2, 0.5)
    sampler = LangevinSampler(target, H)
    assert "no admissible step size" in sampler.admissibility_warnings(0.01)[0]
    traj = sampler.run_chain(ChainConfig(gamma=0.01, K=20, x0=np.zeros(2), seed=0))
    assert traj.k == 20


def test_gradient_norms_are_tracked(mixture, ar1):
    config = ChainConfig(gamma=0.1, K=20, x0=np.zeros(3), seed=3)
    traj = LangevinSampler(mixture, ar1).run_chain(config, track_grad_norms=True)
    assert traj.grad_norms.shape == (20,)
    assert traj.grad_norms[-1] == pytest.approx(np.linalg.norm(mixture.grad_g(traj.samples[-1])))


def test_trajectory_export_round_trip(tmp_path, mixture, ar1):
    config = ChainConfig(gamma=0.1, K=30, x0=np.array([0.1, 0.2, 0.3]), seed=8, record_every=3)
    traj = run_chain(mixture, ar1, config)
    path = str(tmp_path / "chain.csv")
    export_trajectory(traj, path)
    steps, samples, meta = load_trajectory(path)
    assert np.array_equal(steps, traj.steps)
    assert np.array_equal(samples, traj.samples)
    assert meta["target"] == mixture.identifier
    assert meta["precond"] == "ar1:0.5"
    rebuilt = config_from_meta(meta)
    assert rebuilt.gamma == config.gamma
    assert np.array_equal(rebuilt.x0, config.x0)
    assert np.array_equal(run_chain(mixture, ar1, rebuilt).samples, traj.samples)


def test_bare_csv_has_empty_meta(tmp_path):
    path = tmp_path / "bare.csv"
    path.write_text("step,x1\n1,0.5\n2,0.25\n")
    steps, samples, meta = load_trajectory(str(path))
    assert meta == {}
    assert np.array_equal(steps, [1, 2])
    assert samples.shape == (2, 1)
    with pytest.raises(InputError):
        config_from_meta(meta)
