from typing import Any, Dict, List, Optional

import numpy as np

from src.lib.target_loader import resolve_problem
from src.models.theory import KappaConvention
from src.services.theory import (
    ErgodicityAnalyzer,
    gamma_interval,
    plan_sampling,
    problem_constants,
    tv_bound,
)


class TheoryHandler:
    def __init__(self, preset_dir: str):
        self.preset_dir = preset_dir

    def _problem(self, preset, target, params, precond, kappa_convention):
        spec, H, _ = resolve_problem(preset, target, params, precond, self.preset_dir)
        return spec, H, problem_constants(spec, H, kappa_convention)

    async def plan_sampling(
        self,
        epsilon: float,
        preset: Optional[str] = None,
        target: Optional[str] = None,
        params: Optional[Dict[str, Any]] = None,
        precond: Optional[str] = None,
        x0: Optional[List[float]] = None,
        alpha_exp: Optional[float] = None,
        gamma: Optional[float] = None,
        kappa_convention: str = "standard",
    ) -> dict:
        """
        Handles the plan_sampling tool call.
        """
        spec, H, pc = self._problem(preset, target, params, precond, kappa_convention)
        start = np.zeros(spec.dimension) if x0 is None else np.asarray(x0, dtype=float)
        plan = plan_sampling(pc, spec, H, start, epsilon, alpha_exp, gamma)
        return {
            "epsilon": plan.epsilon,
            "T": plan.T,
            "C": plan.C_const,
            "C_star": plan.C_star,
            "gamma_max": plan.gamma_max,
            "gamma": plan.gamma,
            "K": plan.K,
            "kappa": plan.kappa,
            "kappa_star": plan.kappa_star,
            "alpha_exp": plan.alpha_exp,
            "degenerate": plan.degenerate,
            "notes": plan.notes,
        }

    async def ergodicity_bounds(
        self,
        gamma: float,
        preset: Optional[str] = None,
        target: Optional[str] = None,
        params: Optional[Dict[str, Any]] = None,
        precond: Optional[str] = None,
        alpha: Optional[float] = None,
        mc_samples: int = 100_000,
        seed: int = 0,
        x0: Optional[List[float]] = None,
        k: int = 0,
        kappa_convention: str = "standard",
    ) -> dict:
        """
        Handles the ergodicity_bounds tool call.
        """
        spec, H, _ = resolve_problem(preset, target, params, precond, self.preset_dir)
        report = ErgodicityAnalyzer(n_mc=int(mc_samples), seed=int(seed)).analyze(
            spec, H, gamma, alpha=alpha, kappa_convention=KappaConvention(kappa_convention)
        )
        start = np.zeros(spec.dimension) if x0 is None else np.asarray(x0, dtype=float)
        bound = tv_bound(report, start, int(k), spec, H)
        return {
            "gamma": report.gamma,
            "gamma_interval": list(report.gamma_interval),
            "lambda_tilde": report.lambda_tilde,
            "b": report.b,
            "b_tilde": report.b_tilde,
            "alpha": report.alpha,
            "small_set_radius": report.small_set_radius,
            "mu_leb_C": report.mu_leb_C,
            "mu_leb_se": report.mu_leb_se,
            "eta": report.eta,
            "log_eta": report.log_eta,
            "r": report.r,
            "d": report.d,
            "rho": report.rho,
            "tv_bound": {"k": bound.k, "raw": bound.raw, "clipped": bound.clipped, "M_x": bound.M_x},
            "notes": report.notes,
        }

    async def gamma_interval(
        self,
        preset: Optional[str] = None,
        target: Optional[str] = None,
        params: Optional[Dict[str, Any]] = None,
        precond: Optional[str] = None,
        kappa_convention: str = "standard",
    ) -> dict:
        _, _, pc = self._problem(preset, target, params, precond, kappa_convention)
        lo, hi = gamma_interval(pc)
        return {
            "gamma_lo": lo,
            "gamma_hi": hi,
            "m": pc.m,
            "M": pc.M,
            "m_H": pc.m_H,
            "M_H": pc.M_H,
            "beta": pc.beta,
        }
