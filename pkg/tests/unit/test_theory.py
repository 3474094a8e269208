import math
from dataclasses import replace

import numpy as np
import pytest

from src.lib.error_handler import DomainError, InfeasibilityError, InputError
from src.models.theory import ErgodicityReport, KappaConvention, ProblemConstants
from src.services.precond import (
    build_ar1,
    fixed_preconditioner,
    identity_preconditioner,
    tanh_scaled_preconditioner,
)
from src.services.targets import GaussianCosineTarget, MixtureGaussianTarget, QuadraticTarget
from src.services.theory import (
    ErgodicityAnalyzer,
    ball_volume,
    continuous_w2_bound,
    drift_constants,
    drift_expectation,
    drift_factor,
    drift_lyapunov,
    ergodicity_report,
    estimate_mu_leb,
    eta_lower_bound,
    exponential_moment_bound,
    gamma_interval,
    in_gamma_interval,
    kl_discretization_bound,
    log_eta_lower_bound,
    plan_sampling,
    problem_constants,
    rho_bound,
    rho_grid_search,
    tv_bound,
    w2_discretization_bound,
)


def _constants(m=1.0, M=1.0, m_H=1.0, M_H=1.0, beta=0.0, p=1, convention=KappaConvention.STANDARD):
    return ProblemConstants(m=m, M=M, m_H=m_H, M_H=M_H, beta=beta, p=p, kappa_convention=convention)


@pytest.fixture
def hand_report():
    # p = 1, unit constants, beta = 0, gamma = 0.5, alpha = 0.875
    return ErgodicityReport(
        gamma=0.5,
        lambda_tilde=0.25,
        b=1.0,
        b_tilde=1.75,
        alpha=0.875,
        small_set_radius=math.sqrt(4.6),
        gamma_interval=(0.0, 2.0),
    )


@pytest.fixture
def unit_gaussian():
    return QuadraticTarget(A=np.eye(1), mean=np.zeros(1))


@pytest.fixture
def mixture():
    return MixtureGaussianTarget(a=np.array([0.5, 0.0, 0.0]))


def test_gamma_interval_unit_constants():
    lo, hi = gamma_interval(_constants())
    assert lo == pytest.approx(0.0, abs=1e-15)
    assert hi == pytest.approx(2.0)


def test_gamma_interval_with_beta():
    lo, hi = gamma_interval(_constants(m=1.0, M=2.0, beta=0.1))
    assert lo == pytest.approx(0.050569, abs=1e-6)
    assert hi == pytest.approx(0.449431, abs=1e-6)
    # both ends are roots of 4 gamma^2 - 2 gamma + 0.1 / 1.1
    for root in (lo, hi):
        assert 4 * root**2 - 2 * root + 0.1 / 1.1 == pytest.approx(0.0, abs=1e-12)


def test_gamma_interval_without_beta_is_the_constant_h_interval():
    pc = _constants(m=0.75, M=1.0, m_H=0.5, M_H=1.5, p=2)
    lo, hi = gamma_interval(pc)
    assert lo == 0.0
    assert hi == pytest.approx(2 * 0.75 * 0.5 / (1.5**2 * 1.0**2), rel=1e-14)


def test_gamma_interval_infeasible_beta():
    with pytest.raises(InfeasibilityError) as exc:
        gamma_interval(_constants(m=0.5, M=2.0, beta=1.0))
    assert exc.value.condition == "beta-condition"


def test_drift_factor_below_one_exactly_on_the_interval():
    pc = _constants(m=1.0, M=2.0, beta=0.1)
    lo, hi = gamma_interval(pc)
    for gamma in np.linspace(0.5 * lo, 1.2 * hi, 200):
        inside = lo < gamma < hi
        if min(abs(gamma - lo), abs(gamma - hi)) < 1e-9:
            continue
        assert (drift_factor(pc, gamma) < 1.0) == inside
        assert in_gamma_interval(pc, gamma) == inside


def test_drift_constants_hand_values():
    lambda_tilde, b, b_tilde = drift_constants(_constants(), 1.0)
    assert lambda_tilde == pytest.approx(0.0)
    assert b == 2.0
    assert b_tilde == pytest.approx(3.0)


def test_drift_constants_minimum_at_midpoint():
    pc = _constants(m=0.75, M=1.0, m_H=0.5, M_H=1.5)
    mid = pc.m * pc.m_H / (pc.M_H**2 * pc.M**2)
    lambda_tilde, _, _ = drift_constants(pc, mid)
    assert lambda_tilde == pytest.approx(1 - (0.75 * 0.5) ** 2 / 1.5**2)
    assert drift_factor(pc, 0.9 * mid) > lambda_tilde
    assert drift_factor(pc, 1.1 * mid) > lambda_tilde


def test_drift_constants_reject_large_step():
    with pytest.raises(InfeasibilityError) as exc:
        drift_constants(_constants(), 2.5)
    assert exc.value.condition == "step-size"


def test_drift_inequality_at_random_anchors(mixture):
    H = build_ar1(0.5, 3)
    pc = problem_constants(mixture, H)
    gamma = 0.1
    factor = drift_factor(pc, gamma)
    rng = np.random.default_rng(4)
    for _ in range(50):
        x = rng.normal(scale=3.0, size=3)
        expected = drift_expectation(mixture, H, x, gamma)
        assert expected <= factor * drift_lyapunov(mixture, H, x) + 2 * gamma * 3 + 1e-10


def test_drift_expectation_needs_constant_precond(mixture):
    with pytest.raises(DomainError):
        drift_expectation(mixture, tanh_scaled_preconditioner(3, 0.1), np.zeros(3), 0.1)


def test_ball_volume():
    assert ball_volume(1, 2.0) == pytest.approx(4.0)
    assert ball_volume(2, 1.5) == pytest.approx(math.pi * 2.25)
    assert ball_volume(3, 1.0) == pytest.approx(4 / 3 * math.pi)
    assert ball_volume(2, 0.0) == 0.0


def test_mu_leb_of_an_ellipse(hand_report):
    target = QuadraticTarget(A=np.eye(2), mean=np.zeros(2))
    H = fixed_preconditioner(np.diag([1.0, 4.0]))
    report = replace(hand_report, small_set_radius=math.sqrt(4.0 * 4.6))
    estimate = estimate_mu_leb(report, target, H, n_samples=20000, seed=1)
    # {d1^2 + d2^2 / 4 <= 4.6} has area pi * 4.6 * 2
    exact = math.pi * 4.6 * 2.0
    assert abs(estimate.value - exact) <= 4 * estimate.standard_error
    assert estimate.accepted_fraction == pytest.approx(0.5, abs=0.02)


def test_mu_leb_in_one_dimension(hand_report, unit_gaussian):
    estimate = estimate_mu_leb(hand_report, unit_gaussian, identity_preconditioner(1), n_samples=5000)
    assert estimate.value == pytest.approx(2 * math.sqrt(4.6), rel=1e-3)


def test_mu_leb_sample_floor(hand_report, unit_gaussian):
    with pytest.raises(DomainError):
        estimate_mu_leb(hand_report, unit_gaussian, identity_preconditioner(1), n_samples=999)


def test_mu_leb_degenerate_radius(hand_report, unit_gaussian):
    report = replace(hand_report, small_set_radius=0.0)
    estimate = estimate_mu_leb(report, unit_gaussian, identity_preconditioner(1))
    assert estimate.degenerate and estimate.value == 0.0


def test_eta_hand_substitution(hand_report):
    report = replace(hand_report, mu_leb_C=2.0)
    log_eta = log_eta_lower_bound(_constants(), report, 0.0)
    assert log_eta == pytest.approx(math.log(2.0) - 0.5 * math.log(2 * math.pi) - 11.5)
    assert eta_lower_bound(_constants(), report, 0.0) == pytest.approx(2.0 * math.exp(-11.5) / math.sqrt(2 * math.pi))


def test_eta_x_star_terms(hand_report):
    report = replace(hand_report, mu_leb_C=2.0)
    shift = log_eta_lower_bound(_constants(), report, 0.0) - log_eta_lower_bound(_constants(), report, 0.5)
    assert shift == pytest.approx(0.25 + 0.5 * math.sqrt(4.6))


def test_eta_is_capped_at_one(hand_report):
    report = replace(hand_report, mu_leb_C=1e30)
    assert eta_lower_bound(_constants(), report, 0.0) == 1.0


def test_eta_with_empty_small_set(hand_report):
    report = replace(hand_report, mu_leb_C=0.0)
    assert log_eta_lower_bound(_constants(), report, 0.0) == -math.inf
    assert eta_lower_bound(_constants(), report, 0.0) == 0.0


def test_eta_requires_alpha_above_lambda(hand_report):
    report = replace(hand_report, alpha=0.2, mu_leb_C=1.0)
    with pytest.raises(DomainError) as exc:
        log_eta_lower_bound(_constants(), report, 0.0)
    assert exc.value.exit_code == 4


def test_rho_bound_hand_arithmetic(hand_report):
    report = replace(hand_report, eta=0.1)
    rho = rho_bound(report, r=0.5, d=100.0)
    expected = math.sqrt(29.75 / 101) * math.sqrt(54.5)
    assert rho == pytest.approx(expected)
    assert rho == pytest.approx(4.0066, abs=1e-4)


def test_rho_bound_with_full_minorization(hand_report):
    report = replace(hand_report, eta=1.0)
    second = ((1 + 3.5 + 0.25 + 0.25 * 1e4) / (1 + 1e4)) ** 0.01 * (1 + 3.5 + 0.5 * 1e4) ** 0.99
    assert rho_bound(report, r=0.99, d=1e4) == pytest.approx(second)


def test_rho_bound_argument_checks(hand_report):
    with pytest.raises(DomainError):
        rho_bound(hand_report, r=0.5, d=1.0)
    report = replace(hand_report, eta=0.5)
    with pytest.raises(DomainError):
        rho_bound(report, r=1.0, d=1.0)
    with pytest.raises(DomainError):
        rho_bound(report, r=0.5, d=0.0)


def test_rho_grid_search_finds_the_grid_minimum(hand_report):
    report = replace(hand_report, eta=0.3)
    best = rho_grid_search(report)
    assert best.grid.shape == (19 * 61, 3)
    assert best.rho == pytest.approx(best.grid[:, 2].min())
    assert best.rho == pytest.approx(rho_bound(report, best.r, best.d))
    assert best.rho < 1.0


def test_rho_grid_search_without_minorization(hand_report):
    best = rho_grid_search(replace(hand_report, eta=0.0), r_grid=[0.1, 0.5], d_grid=[1.0, 10.0])
    assert best.rho >= 1.0
    assert best.grid.shape == (4, 3)


def test_tv_bound_substitution(hand_report, unit_gaussian):
    report = replace(hand_report, rho=0.9)
    bound = tv_bound(report, np.array([1.0]), 0, unit_gaussian, identity_preconditioner(1))
    assert bound.M_x == pytest.approx(2 + 1.75 / 0.75 + 2)
    assert bound.raw == pytest.approx(bound.M_x)
    assert bound.clipped == 1.0
    later = tv_bound(report, np.array([1.0]), 100, unit_gaussian, identity_preconditioner(1))
    assert later.raw == pytest.approx(bound.M_x * 0.9**100)
    assert later.clipped == later.raw


def test_tv_bound_at_minimizer(hand_report, unit_gaussian):
    bound = tv_bound(replace(hand_report, rho=0.5), np.zeros(1), 3, unit_gaussian, identity_preconditioner(1))
    assert bound.M_x == pytest.approx(3 + 1.75 / 0.75)


def test_tv_bound_saturates_instead_of_overflowing(hand_report, unit_gaussian):
    report = replace(hand_report, rho=4.0066)
    H = identity_preconditioner(1)
    x = np.array([1.0])
    moderate = tv_bound(report, x, 10, unit_gaussian, H)
    assert moderate.raw == pytest.approx(moderate.M_x * 4.0066**10)
    far = tv_bound(report, x, 600, unit_gaussian, H)
    assert far.raw == math.inf
    assert far.clipped == 1.0


def test_analyzer_on_the_hand_example(unit_gaussian):
    report = ErgodicityAnalyzer(n_mc=5000, seed=2).analyze(
        unit_gaussian, identity_preconditioner(1), 0.5, alpha=0.875
    )
    assert report.lambda_tilde == pytest.approx(0.25)
    assert report.b_tilde == pytest.approx(1.75)
    assert report.small_set_radius == pytest.approx(math.sqrt(4.6))
    assert report.mu_leb_C == pytest.approx(2 * math.sqrt(4.6), rel=1e-3)
    assert report.log_eta == pytest.approx(
        math.log(report.mu_leb_C) - 0.5 * math.log(2 * math.pi) - 11.5
    )
    assert 0.0 < report.rho < 1.0
    assert report.notes == []


def test_analyzer_default_alpha_and_determinism(mixture):
    H = build_ar1(0.5, 3)
    first = ergodicity_report(mixture, H, 0.1, n_mc=2000, seed=5)
    second = ergodicity_report(mixture, H, 0.1, n_mc=2000, seed=5)
    assert first.alpha == pytest.approx(0.5 * (1 + first.lambda_tilde))
    assert first.mu_leb_C == second.mu_leb_C
    assert first.rho == second.rho


def test_analyzer_rejects_bad_alpha(unit_gaussian):
    with pytest.raises(DomainError):
        ErgodicityAnalyzer(n_mc=1000).analyze(unit_gaussian, identity_preconditioner(1), 0.5, alpha=0.1)


def test_problem_constants_checks(mixture):
    with pytest.raises(InputError):
        problem_constants(mixture, build_ar1(0.5, 2))
    with pytest.raises(InfeasibilityError):
        problem_constants(GaussianCosineTarget(lambda1=0.9, dim=2), tanh_scaled_preconditioner(2, 0.5))
    pc = problem_constants(mixture, build_ar1(0.5, 3), "doubled")
    assert pc.kappa == pytest.approx(2 * 0.75 * pc.m_H)


def test_plan_horizon_hand_value(unit_gaussian):
    pc = problem_constants(unit_gaussian, identity_preconditioner(1))
    plan = plan_sampling(pc, unit_gaussian, identity_preconditioner(1), np.zeros(1), 0.1)
    assert plan.T == pytest.approx(math.log(20.0))
    assert plan.alpha_exp == pytest.approx(0.25)
    assert plan.gamma == plan.gamma_max
    assert plan.K == math.ceil(plan.T / plan.gamma)
    assert not plan.degenerate


def test_plan_doubled_convention_halves_the_horizon(mixture):
    H = build_ar1(0.5, 3)
    x0 = np.ones(3)
    standard = plan_sampling(problem_constants(mixture, H), mixture, H, x0, 0.1)
    doubled = plan_sampling(problem_constants(mixture, H, KappaConvention.DOUBLED), mixture, H, x0, 0.1)
    assert doubled.T == pytest.approx(0.5 * standard.T)
    # both default to m m_H / 4, strictly inside the admissible set
    assert doubled.alpha_exp == pytest.approx(standard.alpha_exp)
    assert standard.alpha_exp == pytest.approx(0.25 * standard.kappa)


def test_kappa_convention_accepts_the_text_and_appendix_names():
    assert KappaConvention("text") is KappaConvention.DOUBLED
    assert KappaConvention("appendix") is KappaConvention.STANDARD
    assert _constants(convention=KappaConvention("text")).kappa == 2.0
    with pytest.raises(ValueError):
        KappaConvention("halved")


def test_plan_degenerate_when_already_close(unit_gaussian):
    pc = problem_constants(unit_gaussian, identity_preconditioner(1))
    plan = plan_sampling(pc, unit_gaussian, identity_preconditioner(1), np.zeros(1), 5.0)
    assert plan.degenerate
    assert plan.T == 0.0 and plan.K == 0
    assert plan.notes


def test_plan_monotone_in_epsilon(mixture):
    H = build_ar1(0.5, 3)
    pc = problem_constants(mixture, H)
    plans = [plan_sampling(pc, mixture, H, np.ones(3), eps) for eps in (0.01, 0.05, 0.1, 0.5)]
    horizons = [plan.T for plan in plans]
    caps = [plan.gamma_max for plan in plans]
    assert horizons == sorted(horizons, reverse=True)
    assert caps == sorted(caps)


def test_plan_step_size_checks(mixture):
    H = build_ar1(0.5, 3)
    pc = problem_constants(mixture, H)
    plan = plan_sampling(pc, mixture, H, np.ones(3), 0.1)
    smaller = plan_sampling(pc, mixture, H, np.ones(3), 0.1, gamma=0.5 * plan.gamma_max)
    assert smaller.K >= 2 * plan.K - 1
    with pytest.raises(InfeasibilityError) as exc:
        plan_sampling(pc, mixture, H, np.ones(3), 0.1, gamma=2 * plan.gamma_max)
    assert exc.value.condition == "step-size"


def test_plan_input_checks(mixture):
    H = build_ar1(0.5, 3)
    pc = problem_constants(mixture, H)
    with pytest.raises(InputError):
        plan_sampling(pc, mixture, H, np.ones(3), 0.0)
    with pytest.raises(InputError):
        plan_sampling(pc, mixture, H, np.ones(2), 0.1)
    with pytest.raises(InfeasibilityError) as exc:
        plan_sampling(pc, mixture, H, np.ones(3), 0.1, alpha_exp=pc.kappa)
    assert exc.value.condition == "exponential-moment"
    spatial = tanh_scaled_preconditioner(3, 0.05)
    with pytest.raises(DomainError):
        plan_sampling(problem_constants(mixture, spatial), mixture, spatial, np.ones(3), 0.1)


def test_plan_error_budget_splits_evenly(mixture):
    H = build_ar1(0.5, 3)
    pc = problem_constants(mixture, H)
    x0 = np.ones(3)
    plan = plan_sampling(pc, mixture, H, x0, 0.1)
    assert continuous_w2_bound(pc, x0, mixture.x_star, plan.T) == pytest.approx(0.05)
    assert plan.gamma_max < pc.kappa_star / (pc.M * pc.M_H)
    assert w2_discretization_bound(plan) == pytest.approx(0.05)
    assert kl_discretization_bound(plan) == pytest.approx(plan.C_star * plan.gamma)
    assert w2_discretization_bound(plan, 0.5 * plan.gamma) < 0.05


def test_exponential_moment_bound(unit_gaussian):
    pc = problem_constants(unit_gaussian, identity_preconditioner(1))
    x0 = np.array([0.5])
    plan = plan_sampling(pc, unit_gaussian, identity_preconditioner(1), x0, 0.1)
    # grad g(0) = 0, so only E(L0) = exp(alpha x0^2) remains
    expected = math.exp(2 * plan.alpha_exp * plan.T + plan.alpha_exp * 0.25)
    assert exponential_moment_bound(pc, plan) == pytest.approx(expected)
    huge = replace(plan, T=1e6)
    assert exponential_moment_bound(pc, huge) == math.inf
