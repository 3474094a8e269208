from typing import Protocol, runtime_checkable

import numpy as np


@runtime_checkable
class Preconditioner(Protocol):
    """
    Interface shared by fixed and spatially varying preconditioners.

    m_H I <= H(x) <= M_H I for every x, and M_H * ||H^-1(x) - H^-1(y)||_2 <= beta.
    """

    dimension: int
    m_H: float
    M_H: float
    beta: float
    identifier: str

    @property
    def is_constant(self) -> bool: ...

    def at(self, x: np.ndarray) -> np.ndarray: ...

    def sqrt_at(self, x: np.ndarray) -> np.ndarray: ...

    def inv_at(self, x: np.ndarray) -> np.ndarray: ...
