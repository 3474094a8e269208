from typing import Any, Dict, Mapping

import numpy as np

from src.lib.error_handler import InputError
from src.lib.io import parse_vector, read_edge_list
from src.models.target import TargetSpec
from src.services.targets.builtin import (
    GaussianCosineTarget,
    LogisticPathTarget,
    MixtureGaussianTarget,
    QuadraticTarget,
)

TARGET_KINDS = ("mixture", "gcos", "logistic", "gaussian")


def load_logistic_target(path: str) -> LogisticPathTarget:
    data = read_edge_list(path)
    return LogisticPathTarget(
        X=data["X"],
        y=data["y"],
        cutoff=data["cutoff"],
        sigma2=data["sigma2"],
        source=path,
    )


def build_target(kind: str, params: Mapping[str, Any]) -> TargetSpec:
    """
    Builds a target from its kind and parameters:

      mixture:  a (vector)
      gcos:     lambda1, dim
      logistic: file (edge-list path)
      gaussian: dim (identity precision) or diag (diagonal precision)
    """
    try:
        if kind == "mixture":
            return MixtureGaussianTarget(a=_vector(params["a"]))
        if kind == "gcos":
            return GaussianCosineTarget(
                lambda1=float(params["lambda1"]), dim=int(params.get("dim", 1))
            )
        if kind == "logistic":
            return load_logistic_target(str(params["file"]))
        if kind == "gaussian":
            if params.get("diag") is not None:
                diag = _vector(params["diag"])
            else:
                diag = np.ones(int(params.get("dim", 1)))
            return QuadraticTarget(A=np.diag(diag), mean=np.zeros(diag.size))
    except KeyError as e:
        raise InputError(f"target '{kind}' requires parameter {e}")
    except (TypeError, ValueError) as e:
        raise InputError(f"bad parameter for target '{kind}': {e}")
    raise InputError(f"unknown target '{kind}' (expected one of {', '.join(TARGET_KINDS)})")


def parse_target_id(identifier: str) -> TargetSpec:
    """
    Rebuilds a target from `kind:key=value,...` as written by `target.identifier`.
    Vector values keep their commas: `mixture:a=0.5,0.0`.
    """
    kind, _, rest = identifier.partition(":")
    params: Dict[str, str] = {}
    key = None
    for token in rest.split(","):
        if "=" in token:
            key, _, value = token.partition("=")
            params[key] = value
        elif key is not None:
            params[key] += "," + token
        else:
            raise InputError(f"malformed target identifier '{identifier}'")
    if kind == "gaussian" and "custom" in rest:
        raise InputError("custom Gaussian targets cannot be rebuilt from their identifier")
    if kind == "logistic" and "file" not in params:
        raise InputError("logistic targets are only rebuilt from their edge-list file")
    return build_target(kind, params)


def _vector(value: Any) -> np.ndarray:
    if isinstance(value, str):
        return parse_vector(value)
    return np.asarray(value, dtype=float).reshape(-1)
