import logging
from typing import Optional, Sequence


def setup_logging(level: str = "INFO"):
    """
    Sets up the logging configuration for the application.
    """
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


class LangevinToolkitError(Exception):
    """
    Base exception for the preconditioned LMC toolkit.
    """

    exit_code = 1

    def __init__(self, message: str, exit_code: Optional[int] = None):
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(self.message)


class InputError(LangevinToolkitError):
    """
    Exception raised for malformed inputs: shapes, flags, files, sample sizes.
    """

    exit_code = 2

    def __init__(self, message: str):
        super().__init__(f"Input error: {message}")


class DomainError(LangevinToolkitError):
    """
    Exception raised when a parameter lies outside its mathematical domain.
    """

    exit_code = 2

    def __init__(self, message: str, exit_code: Optional[int] = None):
        super().__init__(f"Domain error: {message}", exit_code)


class ConvergenceError(LangevinToolkitError):
    """
    Exception raised when an iterative solver hits its iteration cap.
    """

    exit_code = 3

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"Convergence error: {message} (residual {residual:.3e})")


class DivergenceError(LangevinToolkitError):
    """
    Exception raised when a chain leaves the finite range, usually because the
    step size is too large.
    """

    exit_code = 3

    def __init__(self, step: int, replicate: Optional[int] = None):
        self.step = step
        self.replicate = replicate
        where = f"step {step}"
        if replicate is not None:
            where = f"replicate {replicate}, {where}"
        super().__init__(
            f"Chain diverged at {where}; the step size is likely too large"
        )


class ReplicateDivergenceError(LangevinToolkitError):
    """
    Exception raised when one or more replicates diverge.
    """

    exit_code = 3

    def __init__(self, failures: Sequence[DivergenceError]):
        self.failures = list(failures)
        self.replicates = [f.replicate for f in self.failures]
        steps = ", ".join(f"{f.replicate}@{f.step}" for f in self.failures)
        super().__init__(
            f"{len(self.failures)} replicate(s) diverged (replicate@step): {steps}"
        )


class InfeasibilityError(LangevinToolkitError):
    """
    Exception raised when a hypothesis of the convergence results fails for the given
    constants.
    """

    exit_code = 4

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"Infeasible ({condition}): {message}")


class InstabilityError(LangevinToolkitError):
    """
    Exception raised when a linear recursion is not contractive.
    """

    exit_code = 4

    def __init__(self, spectral_radius: float):
        self.spectral_radius = spectral_radius
        super().__init__(
            f"Recursion is unstable: spectral radius {spectral_radius:.6g} >= 1"
        )
