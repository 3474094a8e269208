"""
Explicit constants of the geometric ergodicity result: admissible step sizes,
drift constants, the small set and its Lebesgue measure, the minorization
constant eta, the rate rho and the total-variation bound M(x) rho^k.
"""

import logging
import math
from dataclasses import replace
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from src.lib.error_handler import DomainError, InfeasibilityError
from src.models.preconditioner import Preconditioner
from src.models.target import TargetSpec
from src.models.theory import (
    ErgodicityReport,
    KappaConvention,
    MuLebEstimate,
    ProblemConstants,
    RhoGridResult,
    TvBound,
)
from src.services.precond.diagnostics import uniform_ball
from src.services.theory.constants import problem_constants

logger = logging.getLogger(__name__)

DEFAULT_R_GRID = np.round(np.arange(1, 20) * 0.05, 2)
DEFAULT_D_GRID = np.logspace(-2, 4, 61)
LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def gamma_interval(pc: ProblemConstants) -> Tuple[float, float]:
    """
    Open interval of step sizes on which (1 + beta)(1 - 2 gamma m m_H + gamma^2 M_H^2 M^2) < 1.
    """
    c = pc.m * pc.m_H
    s = (pc.M_H * pc.M) ** 2
    disc = 1.0 - s * pc.beta / (c * c * (1.0 + pc.beta))
    if disc < 0:
        raise InfeasibilityError(
            "beta-condition",
            f"no admissible step size: 1 - M_H^2 M^2 beta / (m_H^2 m^2 (1 + beta)) = {disc:.6g} < 0",
        )
    root = math.sqrt(disc)
    return (c / s) * (1.0 - root), (c / s) * (1.0 + root)


def in_gamma_interval(pc: ProblemConstants, gamma: float) -> bool:
    try:
        lo, hi = gamma_interval(pc)
    except InfeasibilityError:
        return False
    return lo < gamma < hi


def drift_factor(pc: ProblemConstants, gamma: float) -> float:
    return (1.0 + pc.beta) * (
        1.0 - 2.0 * gamma * pc.m * pc.m_H + gamma**2 * pc.M_H**2 * pc.M**2
    )


def drift_constants(pc: ProblemConstants, gamma: float) -> Tuple[float, float, float]:
    """
    Returns (lambda_tilde, b, b_tilde) of the drift condition
    P V_tilde <= lambda_tilde V_tilde + b_tilde.
    """
    lambda_tilde = drift_factor(pc, gamma)
    if not lambda_tilde < 1.0:
        lo, hi = gamma_interval(pc)
        raise InfeasibilityError(
            "step-size",
            f"gamma={gamma:.6g} gives lambda_tilde={lambda_tilde:.6g} >= 1; "
            f"admissible interval is ({lo:.6g}, {hi:.6g})",
        )
    b = 2.0 * (1.0 + pc.beta) * pc.p * gamma
    return lambda_tilde, b, b + 1.0 - lambda_tilde


def small_set_radius(pc: ProblemConstants, level: float) -> float:
    """Radius sqrt(M_H (level - 1)) of the ball around x* containing the small set."""
    return math.sqrt(max(pc.M_H * (level - 1.0), 0.0))


def drift_lyapunov(
    target: TargetSpec, precond: Preconditioner, x: np.ndarray
) -> float:
    """V(x) = (x - x*)^T H^-1(x) (x - x*)."""
    diff = np.asarray(x, dtype=float) - target.x_star
    return float(diff @ precond.inv_at(x) @ diff)


def drift_expectation(
    target: TargetSpec, precond: Preconditioner, x: np.ndarray, gamma: float
) -> float:
    """
    Exact E[V(x_{k+1}) | x_k = x] for a constant preconditioner:
    V(x) - 2 gamma (x - x*)^T grad g(x) + gamma^2 grad g^T H grad g + 2 gamma p.
    """
    if not precond.is_constant:
        raise DomainError("the closed-form drift expectation needs a constant preconditioner")
    x = np.asarray(x, dtype=float)
    grad = target.grad_g(x)
    diff = x - target.x_star
    H = precond.at(x)
    return (
        drift_lyapunov(target, precond, x)
        - 2.0 * gamma * float(diff @ grad)
        + gamma**2 * float(grad @ H @ grad)
        + 2.0 * gamma * target.dimension
    )


def ball_volume(p: int, radius: float) -> float:
    if radius <= 0:
        return 0.0
    return math.exp(0.5 * p * math.log(math.pi) + p * math.log(radius) - gammaln(0.5 * p + 1.0))


def estimate_mu_leb(
    report: ErgodicityReport,
    target: TargetSpec,
    precond: Preconditioner,
    n_samples: int = 100_000,
    seed: int = 0,
) -> MuLebEstimate:
    """
    Rejection estimate of the Lebesgue measure of C = {V_tilde <= level}: the
    accepted fraction of uniform draws from the enclosing ball times its volume.
    """
    if n_samples < 1000:
        raise DomainError(f"n_samples must be >= 1000, got {n_samples}")
    p = target.dimension
    radius = report.small_set_radius
    if radius <= 0:
        logger.warning("Small set is degenerate (radius 0); its Lebesgue measure is 0")
        return MuLebEstimate(0.0, 0.0, 0.0, 0.0, n_samples, degenerate=True)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    offsets = uniform_ball(rng, n_samples, p, radius)
    bound = report.small_set_level - 1.0
    if precond.is_constant:
        H_inv = precond.inv_at(target.x_star)
        V = np.einsum("ij,jk,ik->i", offsets, H_inv, offsets)
    else:
        x_star = target.x_star
        V = np.array([d @ precond.inv_at(x_star + d) @ d for d in offsets])
    fraction = float(np.mean(V <= bound))
    volume = ball_volume(p, radius)
    se = volume * math.sqrt(fraction * (1.0 - fraction) / n_samples)
    logger.info(
        f"mu_Leb(C) ~ {fraction * volume:.6g} +/- {se:.2g} "
        f"(acceptance {fraction:.4f}, radius {radius:.6g})"
    )
    return MuLebEstimate(
        value=fraction * volume,
        standard_error=se,
        accepted_fraction=fraction,
        ball_volume=volume,
        n_samples=n_samples,
    )


def log_eta_lower_bound(
    pc: ProblemConstants, report: ErgodicityReport, x_star_norm: float
) -> float:
    if not report.lambda_tilde < report.alpha < 1.0:
        raise DomainError(
            f"alpha must lie in (lambda_tilde, 1) = ({report.lambda_tilde:.6g}, 1), "
            f"got {report.alpha}",
            exit_code=4,
        )
    if report.mu_leb_C is None:
        raise DomainError("mu_Leb(C) must be estimated before eta", exit_code=4)
    excess = report.small_set_level - 1.0
    if excess < 0:
        raise DomainError(
            f"2 b_tilde / (alpha - lambda_tilde) = {report.small_set_level:.6g} < 1",
            exit_code=4,
        )
    if report.mu_leb_C <= 0:
        return -math.inf
    exponent = (
        -excess * (pc.M_H / pc.m_H + pc.M * pc.M_H + 0.5 * pc.M_H**2 * pc.M**2)
        - x_star_norm**2 / pc.m_H
        - pc.M * x_star_norm * math.sqrt(pc.M_H * excess)
    )
    return (
        math.log(report.mu_leb_C)
        - 0.5 * pc.p * math.log(2.0 * math.pi * pc.M_H)
        + exponent
    )


def eta_lower_bound(
    pc: ProblemConstants, report: ErgodicityReport, x_star_norm: float
) -> float:
    """
    Explicit minorization constant
    eta = mu_Leb(C) / ((2 pi)^{p/2} M_H^{p/2}) * exp{-(level - 1)(M_H/m_H + M M_H + M_H^2 M^2 / 2)
          - |x*|^2 / m_H - M |x*| sqrt(M_H (level - 1))}, capped at 1.
    """
    log_eta = log_eta_lower_bound(pc, report, x_star_norm)
    return min(1.0, math.exp(log_eta)) if log_eta > -math.inf else 0.0


def _rho_terms(eta, lambda_tilde, b_tilde, r, d):
    first = np.exp(r * np.log1p(-np.minimum(eta, 1.0))) if eta < 1.0 else np.zeros_like(r * d)
    second = ((1.0 + 2.0 * b_tilde + lambda_tilde + lambda_tilde * d) / (1.0 + d)) ** (
        1.0 - r
    ) * (1.0 + 2.0 * b_tilde + 2.0 * lambda_tilde * d) ** r
    return first, second


def rho_bound(report: ErgodicityReport, r: Optional[float] = None, d: Optional[float] = None) -> float:
    """
    max{(1 - eta)^r, ((1 + 2 b_tilde + lambda_tilde + lambda_tilde d) / (1 + d))^{1-r}
        (1 + 2 b_tilde + 2 lambda_tilde d)^r}
    """
    r = report.r if r is None else r
    d = report.d if d is None else d
    eta = report.eta
    if eta is None or not 0.0 < eta <= 1.0:
        raise DomainError(f"eta must lie in (0, 1], got {eta}", exit_code=4)
    if r is None or not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}", exit_code=4)
    if d is None or not d > 0.0:
        raise DomainError(f"d must be > 0, got {d}", exit_code=4)
    first, second = _rho_terms(eta, report.lambda_tilde, report.b_tilde, np.float64(r), np.float64(d))
    return float(max(first, second))


def rho_grid_search(
    report: ErgodicityReport,
    r_grid: Optional[Sequence[float]] = None,
    d_grid: Optional[Sequence[float]] = None,
) -> RhoGridResult:
    """
    Minimizes the rho bound over an (r, d) grid. Ties go to the smallest r, then
    the smallest d. An eta that underflowed to 0 certifies nothing (rho >= 1).
    """
    r_values = np.asarray(DEFAULT_R_GRID if r_grid is None else r_grid, dtype=float)
    d_values = np.asarray(DEFAULT_D_GRID if d_grid is None else d_grid, dtype=float)
    if np.any((r_values <= 0) | (r_values >= 1)) or np.any(d_values <= 0):
        raise DomainError("grid must have r in (0, 1) and d > 0", exit_code=4)
    r_values = np.sort(r_values)
    d_values = np.sort(d_values)
    eta = 0.0 if report.eta is None else report.eta
    R, D = np.meshgrid(r_values, d_values, indexing="ij")
    first, second = _rho_terms(eta, report.lambda_tilde, report.b_tilde, R, D)
    rho = np.maximum(first, second)
    flat = int(np.argmin(rho))
    grid = np.column_stack([R.ravel(), D.ravel(), rho.ravel()])
    return RhoGridResult(
        r=float(grid[flat, 0]), d=float(grid[flat, 1]), rho=float(grid[flat, 2]), grid=grid
    )


def tv_bound(
    report: ErgodicityReport,
    x: np.ndarray,
    k: int,
    target: TargetSpec,
    precond: Preconditioner,
) -> TvBound:
    """
    M(x) rho^k with M(x) = 2 + b_tilde / (1 - lambda_tilde) + V_tilde(x).

    The product is formed in log space; raw is inf once it exceeds the float range.
    """
    if report.rho is None:
        raise DomainError("rho must be computed before the TV bound", exit_code=4)
    V_tilde = drift_lyapunov(target, precond, x) + 1.0
    M_x = 2.0 + report.b_tilde / (1.0 - report.lambda_tilde) + V_tilde
    if k == 0:
        raw = M_x
    elif report.rho <= 0.0:
        raw = 0.0
    else:
        log_raw = math.log(M_x) + k * math.log(report.rho)
        raw = math.exp(log_raw) if log_raw < LOG_FLOAT_MAX else math.inf
    return TvBound(raw=raw, clipped=min(1.0, raw), M_x=M_x, k=k)


class ErgodicityAnalyzer:
    """Assembles a full ErgodicityReport for a (target, preconditioner, gamma) triple."""

    def __init__(self, n_mc: int = 100_000, seed: int = 0):
        self.n_mc = n_mc
        self.seed = seed
        self.logger = logging.getLogger(__name__)

    def analyze(
        self,
        target: TargetSpec,
        precond: Preconditioner,
        gamma: float,
        alpha: Optional[float] = None,
        r_grid: Optional[Sequence[float]] = None,
        d_grid: Optional[Sequence[float]] = None,
        kappa_convention: KappaConvention = KappaConvention.STANDARD,
    ) -> ErgodicityReport:
        pc = problem_constants(target, precond, kappa_convention)
        interval = gamma_interval(pc)
        lambda_tilde, b, b_tilde = drift_constants(pc, gamma)
        if alpha is None:
            alpha = 0.5 * (1.0 + lambda_tilde)
        if not lambda_tilde < alpha < 1.0:
            raise DomainError(
                f"alpha must lie in (lambda_tilde, 1) = ({lambda_tilde:.6g}, 1), got {alpha}",
                exit_code=4,
            )
        level = 2.0 * b_tilde / (alpha - lambda_tilde)
        report = ErgodicityReport(
            gamma=gamma,
            lambda_tilde=lambda_tilde,
            b=b,
            b_tilde=b_tilde,
            alpha=alpha,
            small_set_radius=small_set_radius(pc, level),
            gamma_interval=interval,
        )
        mu = estimate_mu_leb(report, target, precond, self.n_mc, self.seed)
        report = replace(report, mu_leb_C=mu.value, mu_leb_se=mu.standard_error)
        x_star_norm = float(np.linalg.norm(target.x_star))
        log_eta = log_eta_lower_bound(pc, report, x_star_norm)
        eta = eta_lower_bound(pc, report, x_star_norm)
        notes = []
        if log_eta > 0:
            notes.append("eta capped at 1")
        if eta == 0.0:
            notes.append("eta underflowed to 0; no rate below 1 is certified")
        report = replace(report, eta=eta, log_eta=log_eta)
        best = rho_grid_search(report, r_grid, d_grid)
        if best.rho >= 1.0:
            notes.append("no (r, d) on the grid certifies rho < 1")
        report = replace(report, r=best.r, d=best.d, rho=best.rho, notes=notes)
        self.logger.info(
            f"Ergodicity report for {target.identifier} / {precond.identifier}: "
            f"lambda_tilde={lambda_tilde:.6g}, eta={eta:.3e}, rho={best.rho:.12g}"
        )
        return report


def ergodicity_report(
    target: TargetSpec,
    precond: Preconditioner,
    gamma: float,
    alpha: Optional[float] = None,
    n_mc: int = 100_000,
    seed: int = 0,
    kappa_convention: KappaConvention = KappaConvention.STANDARD,
) -> ErgodicityReport:
    return ErgodicityAnalyzer(n_mc=n_mc, seed=seed).analyze(
        target, precond, gamma, alpha=alpha, kappa_convention=kappa_convention
    )
