from typing import Union

from src.lib.error_handler import InputError
from src.models.preconditioner import Preconditioner
from src.models.target import TargetSpec
from src.models.theory import KappaConvention, ProblemConstants
from src.services.precond.diagnostics import check_beta_condition


def problem_constants(
    target: TargetSpec,
    precond: Preconditioner,
    kappa_convention: Union[str, KappaConvention] = KappaConvention.STANDARD,
) -> ProblemConstants:
    """
    Pairs a target with a preconditioner, checking dimensions and the beta
    condition on the change of H^-1.
    """
    if target.dimension != precond.dimension:
        raise InputError(
            f"target dimension {target.dimension} does not match preconditioner "
            f"dimension {precond.dimension}"
        )
    check_beta_condition(target.m, target.M, precond.m_H, precond.M_H, precond.beta)
    return ProblemConstants(
        m=target.m,
        M=target.M,
        m_H=precond.m_H,
        M_H=precond.M_H,
        beta=precond.beta,
        p=target.dimension,
        kappa_convention=KappaConvention(kappa_convention),
    )
