"""
Non-asymptotic sampling plan in Wasserstein-2: horizon T, the discretization
constants C* and C, the largest admissible step size and the iteration count.
"""

import logging
import math
from typing import Optional

import numpy as np

from src.lib.error_handler import DomainError, InfeasibilityError, InputError
from src.models.preconditioner import Preconditioner
from src.models.target import TargetSpec
from src.models.theory import ProblemConstants, SamplingPlan

logger = logging.getLogger(__name__)


def _check_alpha(pc: ProblemConstants, alpha_exp: float) -> float:
    if not 0.0 < alpha_exp < 0.5 * pc.kappa:
        raise InfeasibilityError(
            "exponential-moment",
            f"alpha must lie in (0, kappa/2) = (0, {0.5 * pc.kappa:.6g}), got {alpha_exp}",
        )
    denom = 2.0 * pc.m - 4.0 * alpha_exp / pc.m_H
    if denom <= 0:
        raise InfeasibilityError(
            "exponential-moment",
            f"2m - 4 alpha / m_H = {denom:.6g} must be > 0",
        )
    return denom


def plan_sampling(
    pc: ProblemConstants,
    target: TargetSpec,
    precond: Preconditioner,
    x0: np.ndarray,
    epsilon: float,
    alpha_exp: Optional[float] = None,
    gamma: Optional[float] = None,
) -> SamplingPlan:
    """
    Step size and iteration count that bring the chain started at x0 within
    epsilon of the target in W2.

    gamma defaults to gamma_max; a larger user-supplied gamma is infeasible.
    alpha_exp defaults to min(kappa, m m_H) / 4, inside the admissible set
    under either kappa convention.
    """
    if not precond.is_constant:
        raise DomainError("sampling plans are only available for constant preconditioners")
    if not epsilon > 0:
        raise InputError(f"epsilon must be > 0, got {epsilon}")
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.size != pc.p:
        raise InputError(f"x0 has dimension {x0.size}, expected {pc.p}")
    kappa = pc.kappa
    kappa_star = pc.kappa_star
    if alpha_exp is None:
        alpha_exp = 0.25 * min(kappa, pc.m * pc.m_H)
    denom = _check_alpha(pc, alpha_exp)

    notes = []
    x_star = target.x_star
    dist = float(np.linalg.norm(x0 - x_star))
    arg = (2.0 / epsilon) * (dist / math.sqrt(kappa_star) + math.sqrt(pc.p / pc.m) / kappa_star)
    T = math.log(arg) / kappa
    degenerate = T <= 0
    if degenerate:
        T = 0.0
        notes.append("x0 is already epsilon-close; no iterations needed")

    log_E_L0 = alpha_exp * float(x0 @ precond.inv_at(x0) @ x0)
    grad0 = target.grad_g(np.zeros(pc.p))
    extra = alpha_exp * float(grad0 @ grad0) * T / denom
    log_moment = float(np.logaddexp(log_E_L0, math.log(extra))) if extra > 0 else log_E_L0
    C_const = (pc.M_H / alpha_exp) * (1.5 + 2.0 * alpha_exp * T * pc.p + log_moment)
    C_star = (pc.M_H / 6.0) * (target.g(x0) - target.g(x_star)) + (
        5.0 / 12.0
    ) * pc.M_H**2 * pc.M * pc.p * T

    # sqrt(1 + z) - 1 without cancellation for small z
    root = math.expm1(0.5 * math.log1p(2.0**1.5 * epsilon / C_const))
    discretization_cap = root**4 / (32.0 * C_star) if C_star > 0 else math.inf
    gamma_max = min(discretization_cap, kappa_star / (pc.M * pc.M_H))

    if gamma is None:
        gamma = gamma_max
    elif not gamma > 0:
        raise InputError(f"gamma must be > 0, got {gamma}")
    elif gamma > gamma_max:
        raise InfeasibilityError(
            "step-size", f"gamma={gamma:.6g} exceeds gamma_max={gamma_max:.6g}"
        )
    K = 0 if degenerate else int(math.ceil(T / gamma))

    logger.info(
        f"Sampling plan for {target.identifier}: eps={epsilon}, T={T:.6g}, "
        f"gamma_max={gamma_max:.6g}, K={K}"
    )
    return SamplingPlan(
        epsilon=epsilon,
        T=T,
        C_star=C_star,
        C_const=C_const,
        gamma_max=gamma_max,
        gamma=gamma,
        K=K,
        alpha_exp=alpha_exp,
        kappa=kappa,
        kappa_star=kappa_star,
        x0=x0,
        log_E_L0=log_E_L0,
        log_moment_term=log_moment,
        degenerate=degenerate,
        notes=notes,
    )


def continuous_w2_bound(
    pc: ProblemConstants, x0: np.ndarray, x_star: np.ndarray, t: float
) -> float:
    """kappa*^{-1/2} e^{-kappa t} (|x0 - x*| + (p / (m kappa*))^{1/2})."""
    dist = float(np.linalg.norm(np.asarray(x0, dtype=float) - np.asarray(x_star, dtype=float)))
    return (
        math.exp(-pc.kappa * t)
        * (dist + math.sqrt(pc.p / (pc.m * pc.kappa_star)))
        / math.sqrt(pc.kappa_star)
    )


def kl_discretization_bound(plan: SamplingPlan, gamma: Optional[float] = None) -> float:
    return plan.C_star * (plan.gamma if gamma is None else gamma)


def w2_discretization_bound(plan: SamplingPlan, gamma: Optional[float] = None) -> float:
    """C [(C* gamma)^{1/2} + (C* gamma / 2)^{1/4}]."""
    kl = kl_discretization_bound(plan, gamma)
    return plan.C_const * (math.sqrt(kl) + (0.5 * kl) ** 0.25)


def exponential_moment_bound(pc: ProblemConstants, plan: SamplingPlan) -> float:
    """e^{2 alpha p T} (E(L0) + alpha |grad g(0)|^2 T / (2m - 4 alpha / m_H))."""
    try:
        return math.exp(2.0 * plan.alpha_exp * pc.p * plan.T + plan.log_moment_term)
    except OverflowError:
        return math.inf
