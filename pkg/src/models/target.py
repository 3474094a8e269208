from abc import ABC, abstractmethod
from functools import cached_property

import numpy as np


class TargetSpec(ABC):
    """
    A potential g on R^p that is m-strongly convex with M-Lipschitz gradient.

    The sampler targets the density proportional to exp(-g).
    """

    kind: str = "target"

    @property
    @abstractmethod
    def dimension(self) -> int: ...

    @property
    @abstractmethod
    def m(self) -> float: ...

    @property
    @abstractmethod
    def M(self) -> float: ...

    @property
    @abstractmethod
    def identifier(self) -> str: ...

    @abstractmethod
    def g(self, x: np.ndarray) -> float: ...

    @abstractmethod
    def grad_g(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def hess_g(self, x: np.ndarray) -> np.ndarray: ...

    def closed_form_minimizer(self):
        """Returns the minimizer when it is known analytically, else None."""
        return None

    @cached_property
    def x_star(self) -> np.ndarray:
        known = self.closed_form_minimizer()
        if known is not None:
            return np.asarray(known, dtype=float)
        # Local import: the minimizer lives with the target operations.
        from src.services.targets.operations import find_minimizer

        return find_minimizer(self, tol=1e-10)
