"""
Tool names, input schemas and the keys every tool result carries. The server
lists tools from here and the contract tests check results against it.
"""

from typing import Any, Dict, List

from src.models.theory import KAPPA_CONVENTION_NAMES

_PROBLEM_PROPERTIES: Dict[str, Any] = {
    "preset": {"type": "string", "description": "named target preset"},
    "target": {"type": "string", "enum": ["mixture", "gcos", "logistic", "gaussian"]},
    "params": {
        "type": "object",
        "description": "target parameters: a, lambda1, dim, file or diag",
    },
    "precond": {"type": "string", "description": "identity | ar1:<rho> | file:<path> | tanh:<eps>"},
}

_CONVENTION_PROPERTY: Dict[str, Any] = {
    "kappa_convention": {"type": "string", "enum": KAPPA_CONVENTION_NAMES},
}


def _schema(
    properties: Dict[str, Any], required: List[str], convention: bool = True
) -> Dict[str, Any]:
    problem = {**_PROBLEM_PROPERTIES, **(_CONVENTION_PROPERTY if convention else {})}
    return {
        "type": "object",
        "properties": {**problem, **properties},
        "required": required,
    }


TOOLS: Dict[str, Dict[str, Any]] = {
    "sample_chain": {
        "description": "Run seeded preconditioned LMC chains and summarise them.",
        "input_schema": _schema(
            {
                "gamma": {"type": "number"},
                "iters": {"type": "integer"},
                "seed": {"type": "integer"},
                "x0": {"type": "array", "items": {"type": "number"}},
                "record_every": {"type": "integer"},
                "burn_in": {"type": "integer"},
                "replicates": {"type": "integer"},
                "return_samples": {"type": "boolean"},
            },
            ["gamma", "iters"],
            convention=False,
        ),
        "output_keys": ["target", "precond", "gamma", "K", "rows", "replicates",
                        "means", "terminal_states", "warnings"],
    },
    "plan_sampling": {
        "description": "Step size and iteration count for a W2 accuracy epsilon.",
        "input_schema": _schema(
            {
                "epsilon": {"type": "number"},
                "x0": {"type": "array", "items": {"type": "number"}},
                "alpha_exp": {"type": "number"},
                "gamma": {"type": "number"},
            },
            ["epsilon"],
        ),
        "output_keys": ["epsilon", "T", "C", "C_star", "gamma_max", "gamma", "K",
                        "kappa", "kappa_star", "degenerate", "notes"],
    },
    "ergodicity_bounds": {
        "description": "Drift, small-set, minorization and rate constants for a step size.",
        "input_schema": _schema(
            {
                "gamma": {"type": "number"},
                "alpha": {"type": "number"},
                "mc_samples": {"type": "integer"},
                "seed": {"type": "integer"},
                "x0": {"type": "array", "items": {"type": "number"}},
                "k": {"type": "integer"},
            },
            ["gamma"],
        ),
        "output_keys": ["gamma", "gamma_interval", "lambda_tilde", "b", "b_tilde", "alpha",
                        "small_set_radius", "mu_leb_C", "eta", "r", "d", "rho",
                        "tv_bound", "notes"],
    },
    "gamma_interval": {
        "description": "Admissible step-size interval for a target and preconditioner.",
        "input_schema": _schema({}, []),
        "output_keys": ["gamma_lo", "gamma_hi", "m", "M", "m_H", "M_H", "beta"],
    },
    "projection_interval": {
        "description": "Batch-means confidence interval for a one-dimensional projection.",
        "input_schema": {
            "type": "object",
            "properties": {
                "samples": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
                "trajectory": {"type": "string", "description": "trajectory CSV path"},
                "u": {"type": "array", "items": {"type": "number"}},
                "x_star": {"type": "array", "items": {"type": "number"}},
                "M_H": {"type": "number"},
                "level": {"type": "number"},
                "n_batches": {"type": "integer"},
            },
            "required": ["u"],
        },
        "output_keys": ["point_estimate", "sigma_hat", "level", "interval", "k",
                        "n_batches", "degenerate", "estimand"],
    },
}
