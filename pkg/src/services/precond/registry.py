from src.lib.error_handler import InputError
from src.lib.io import read_matrix
from src.models.preconditioner import Preconditioner
from src.services.precond.preconditioners import (
    build_ar1,
    fixed_preconditioner,
    identity_preconditioner,
    tanh_scaled_preconditioner,
)


def build_precond(spec: str, p: int) -> Preconditioner:
    """
    Builds a preconditioner from its identifier:
    identity | ar1:<rho> | file:<path> | tanh:<eps>.
    """
    kind, _, arg = spec.strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "identity":
            return identity_preconditioner(p)
        if kind == "ar1":
            return build_ar1(float(arg), p)
        if kind == "tanh":
            return tanh_scaled_preconditioner(p, float(arg))
    except ValueError as e:
        raise InputError(f"bad preconditioner argument in '{spec}': {e}")
    if kind == "file":
        H = read_matrix(arg)
        if H.shape[0] != p:
            raise InputError(
                f"preconditioner file {arg} has dimension {H.shape[0]}, target has {p}"
            )
        return fixed_preconditioner(H, identifier=f"file:{arg}")
    raise InputError(
        f"unknown preconditioner '{spec}' (expected identity, ar1:<rho>, file:<path> or tanh:<eps>)"
    )


