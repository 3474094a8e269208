"""The concrete strongly convex potentials: mixture, Gaussian-cosine, logistic path, quadratic."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import expit

from src.lib.error_handler import DomainError, InputError
from src.lib.io import format_value
from src.models.target import TargetSpec

ORIGIN_TOL = 1e-12


def _as_point(x: np.ndarray, p: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (p,):
        raise InputError(f"expected a point of shape ({p},), got {x.shape}")
    return x


@dataclass(frozen=True, eq=False)
class MixtureGaussianTarget(TargetSpec):
    """
    Equal-weight mixture of N(a, I) and N(-a, I):
    g(x) = |x - a|^2 / 2 - log(1 + exp(-2 x^T a)).
    """

    a: np.ndarray
    kind = "mixture"

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).reshape(-1)
        object.__setattr__(self, "a", a)
        if a.size == 0:
            raise InputError("mixture offset a must be non-empty")
        if not np.linalg.norm(a) < 1.0:
            raise DomainError(f"mixture offset must satisfy |a| < 1, got |a|={np.linalg.norm(a):.6g}")

    @property
    def dimension(self) -> int:
        return int(self.a.size)

    @property
    def m(self) -> float:
        return 1.0 - float(self.a @ self.a)

    @property
    def M(self) -> float:
        return 1.0

    @property
    def identifier(self) -> str:
        return f"mixture:a={format_value(self.a)}"

    def closed_form_minimizer(self):
        return np.zeros(self.dimension)

    def g(self, x: np.ndarray) -> float:
        x = _as_point(x, self.dimension)
        diff = x - self.a
        # log(1 + e^u) via logaddexp
        return float(0.5 * diff @ diff - np.logaddexp(0.0, -2.0 * (x @ self.a)))

    def grad_g(self, x: np.ndarray) -> np.ndarray:
        x = _as_point(x, self.dimension)
        # (1 + e^u)^-1 = expit(-u)
        return x - self.a + 2.0 * self.a * expit(-2.0 * (x @ self.a))

    def hess_g(self, x: np.ndarray) -> np.ndarray:
        x = _as_point(x, self.dimension)
        s = expit(2.0 * (x @ self.a))
        return np.eye(self.dimension) - 4.0 * s * (1.0 - s) * np.outer(self.a, self.a)


@dataclass(frozen=True, eq=False)
class GaussianCosineTarget(TargetSpec):
    """g(x) = |x|^2 / 2 - lambda1 * cos|x|, with 0 < lambda1 < 1."""

    lambda1: float
    dim: int
    kind = "gcos"

    def __post_init__(self):
        if not 0.0 < self.lambda1 < 1.0:
            raise DomainError(f"lambda1 must lie in (0, 1), got {self.lambda1}")
        if self.dim < 1:
            raise InputError(f"dimension must be >= 1, got {self.dim}")

    @property
    def dimension(self) -> int:
        return self.dim

    @property
    def m(self) -> float:
        return 1.0 - self.lambda1

    @property
    def M(self) -> float:
        return 1.0 + self.lambda1

    @property
    def identifier(self) -> str:
        return f"gcos:lambda1={format_value(float(self.lambda1))},dim={self.dim}"

    def closed_form_minimizer(self):
        return np.zeros(self.dimension)

    def g(self, x: np.ndarray) -> float:
        x = _as_point(x, self.dimension)
        r = np.linalg.norm(x)
        return float(0.5 * r * r - self.lambda1 * np.cos(r))

    def grad_g(self, x: np.ndarray) -> np.ndarray:
        x = _as_point(x, self.dimension)
        r = np.linalg.norm(x)
        if r < ORIGIN_TOL:
            return np.zeros(self.dimension)
        return x * (1.0 + self.lambda1 * np.sin(r) / r)

    def hess_g(self, x: np.ndarray) -> np.ndarray:
        x = _as_point(x, self.dimension)
        r = np.linalg.norm(x)
        if r < 1e-4:
            # series of sin(r)/r and (r cos r - sin r)/r^3 around 0
            sinc = 1.0 - r * r / 6.0
            curv = -1.0 / 3.0 + r * r / 30.0
        else:
            sinc = np.sin(r) / r
            curv = (r * np.cos(r) - np.sin(r)) / r**3
        return (1.0 + self.lambda1 * sinc) * np.eye(self.dimension) + self.lambda1 * curv * np.outer(x, x)


@dataclass(frozen=True, eq=False)
class LogisticPathTarget(TargetSpec):
    """
    Negative log posterior of the path-cost logistic model with N(0, sigma2 I) prior:
    y_t | theta ~ Bernoulli(1 / (1 + exp(x_t^T theta - cutoff))).

    X is |E| x n (column t is the path indicator x_t); the additive constant is 0.
    """

    X: np.ndarray
    y: np.ndarray
    cutoff: float
    sigma2: float
    source: str = ""
    kind = "logistic"

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).reshape(-1)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if self.sigma2 <= 0:
            raise DomainError(f"prior variance must be > 0, got {self.sigma2}")
        if X.shape[1] != y.size:
            raise InputError(
                f"design matrix has {X.shape[1]} observations but y has {y.size}"
            )
        if not np.all(np.isin(y, (0.0, 1.0))):
            raise InputError("responses must be 0 or 1")
        if not np.all(np.isin(X, (0.0, 1.0))):
            raise InputError("path indicators must be 0 or 1")

    @property
    def dimension(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_observations(self) -> int:
        return int(self.X.shape[1])

    @property
    def m(self) -> float:
        return 1.0 / self.sigma2

    @cached_property
    def M(self) -> float:
        # the logistic curvature e^u / (1 + e^u)^2 never exceeds 1/4
        if self.n_observations == 0:
            return 1.0 / self.sigma2
        lam_max = float(np.linalg.eigvalsh(self.X @ self.X.T)[-1])
        return 1.0 / self.sigma2 + 0.25 * lam_max

    @property
    def identifier(self) -> str:
        if self.source:
            return f"logistic:file={self.source}"
        return f"logistic:edges={self.dimension},n={self.n_observations}"

    def closed_form_minimizer(self):
        if self.n_observations == 0:
            return np.zeros(self.dimension)
        return None

    def _linear(self, theta: np.ndarray) -> np.ndarray:
        return self.X.T @ theta - self.cutoff

    def g(self, x: np.ndarray) -> float:
        theta = _as_point(x, self.dimension)
        u = self._linear(theta)
        return float(
            np.sum(np.logaddexp(0.0, u))
            - np.sum((1.0 - self.y) * u)
            + 0.5 * (theta @ theta) / self.sigma2
        )

    def grad_g(self, x: np.ndarray) -> np.ndarray:
        theta = _as_point(x, self.dimension)
        u = self._linear(theta)
        return self.X @ (expit(u) - (1.0 - self.y)) + theta / self.sigma2

    def hess_g(self, x: np.ndarray) -> np.ndarray:
        theta = _as_point(x, self.dimension)
        s = expit(self._linear(theta))
        return (self.X * (s * (1.0 - s))) @ self.X.T + np.eye(self.dimension) / self.sigma2


@dataclass(frozen=True, eq=False)
class QuadraticTarget(TargetSpec):
    """Gaussian potential g(x) = (x - mean)^T A (x - mean) / 2 with SPD precision A."""

    A: np.ndarray
    mean: np.ndarray
    kind = "gaussian"

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        if A.shape != (mean.size, mean.size):
            raise InputError(
                f"precision shape {A.shape} does not match mean of length {mean.size}"
            )
        eigvals = np.linalg.eigvalsh(0.5 * (A + A.T))
        if eigvals[0] <= 0:
            raise DomainError(
                f"precision matrix is not positive definite: smallest eigenvalue {eigvals[0]:.6g}"
            )
        object.__setattr__(self, "A", 0.5 * (A + A.T))
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "_eigvals", eigvals)

    @property
    def dimension(self) -> int:
        return int(self.mean.size)

    @property
    def m(self) -> float:
        return float(self._eigvals[0])

    @property
    def M(self) -> float:
        return float(self._eigvals[-1])

    @property
    def identifier(self) -> str:
        if np.any(self.mean != 0.0):
            return "gaussian:custom"
        if np.array_equal(self.A, np.diag(np.diag(self.A))):
            return f"gaussian:diag={format_value(np.diag(self.A))}"
        return "gaussian:custom"

    def closed_form_minimizer(self):
        return self.mean.copy()

    def g(self, x: np.ndarray) -> float:
        diff = _as_point(x, self.dimension) - self.mean
        return float(0.5 * diff @ self.A @ diff)

    def grad_g(self, x: np.ndarray) -> np.ndarray:
        return self.A @ (_as_point(x, self.dimension) - self.mean)

    def hess_g(self, x: np.ndarray) -> np.ndarray:
        _as_point(x, self.dimension)
        return self.A.copy()
