"""Plain-text formats: trajectory CSV + meta sidecar, matrices, edge lists, reports."""

import os
import shlex
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from src.lib.error_handler import InputError


def format_value(value: Any) -> str:
    """Renders floats with shortest round-trip precision and vectors comma-separated."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.ndarray, list, tuple)):
        return ",".join(format_value(v) for v in np.asarray(value).reshape(-1).tolist())
    return str(value)


def format_report(items: Mapping[str, Any]) -> str:
    """Flat key=value report, one entry per line, in insertion order."""
    return "".join(f"{key}={format_value(value)}\n" for key, value in items.items())


def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",") if v.strip()], dtype=float)
    except ValueError:
        raise InputError(f"expected a comma-separated vector, got '{text}'")


def meta_path(csv_path: str) -> str:
    return os.path.splitext(csv_path)[0] + ".meta"


def write_trajectory_csv(
    path: str, steps: np.ndarray, samples: np.ndarray, meta: Mapping[str, Any]
) -> None:
    """Writes `step,x1,...,xp` rows plus a key=value `.meta` sidecar."""
    p = samples.shape[1]
    header = ",".join(["step"] + [f"x{i + 1}" for i in range(p)])
    table = np.column_stack([steps.astype(float), samples])
    fmt = ["%d"] + ["%.17g"] * p
    np.savetxt(path, table, fmt=fmt, delimiter=",", header=header, comments="")
    with open(meta_path(path), "w") as f:
        f.write(format_report(meta))


def read_meta(path: str) -> Dict[str, str]:
    if not os.path.exists(path):
        raise InputError(f"meta sidecar not found: {path}")
    meta: Dict[str, str] = {}
    with open(path, "r") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InputError(f"malformed meta line in {path}: '{line}'")
            meta[key.strip()] = value.strip()
    return meta


def read_trajectory_csv(path: str) -> Tuple[np.ndarray, np.ndarray]:
    """Returns (steps, samples) from a trajectory CSV."""
    if not os.path.exists(path):
        raise InputError(f"trajectory file not found: {path}")
    with open(path, "r") as f:
        header = f.readline().strip().split(",")
    if not header or header[0] != "step":
        raise InputError(f"{path} is not a trajectory CSV (missing 'step' header)")
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if table.size == 0:
        return np.zeros(0, dtype=int), np.zeros((0, len(header) - 1))
    return table[:, 0].astype(int), table[:, 1:]


def read_matrix(path: str) -> np.ndarray:
    """
    Dense matrix file: first line `p`, then p whitespace-separated rows.
    """
    if not os.path.exists(path):
        raise InputError(f"matrix file not found: {path}")
    with open(path, "r") as f:
        lines = [line.strip() for line in f if line.strip()]
    try:
        p = int(lines[0])
        rows = [[float(v) for v in line.split()] for line in lines[1:]]
    except (IndexError, ValueError) as e:
        raise InputError(f"malformed matrix file {path}: {e}")
    if len(rows) != p or any(len(row) != p for row in rows):
        raise InputError(f"matrix file {path} does not hold {p} rows of {p} values")
    return np.array(rows, dtype=float)


def read_edge_list(path: str) -> Dict[str, Any]:
    """
    Path-observation file: header `edges=<|E|> cutoff=<M> sigma2=<s2>`, then one
    line per observation `e1,e2,...;y`. Returns the |E| x n design matrix.
    """
    if not os.path.exists(path):
        raise InputError(f"edge-list file not found: {path}")
    with open(path, "r") as f:
        lines = [line.strip() for line in f]
    lines = [line for line in lines if line and not line.startswith("#")]
    if not lines:
        raise InputError(f"edge-list file {path} is empty")
    header: Dict[str, str] = {}
    for token in lines[0].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise InputError(f"malformed edge-list header token '{token}'")
        header[key] = value
    try:
        n_edges = int(header["edges"])
        cutoff = float(header["cutoff"])
        sigma2 = float(header["sigma2"])
    except (KeyError, ValueError) as e:
        raise InputError(f"edge-list header must define edges, cutoff, sigma2: {e}")
    columns: List[np.ndarray] = []
    responses: List[float] = []
    for lineno, line in enumerate(lines[1:], start=2):
        path_part, sep, y_part = line.partition(";")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected '<edges>;<y>'")
        column = np.zeros(n_edges)
        for token in path_part.split(","):
            if not token.strip():
                continue
            edge = int(token)
            if not 0 <= edge < n_edges:
                raise InputError(f"{path}:{lineno}: edge index {edge} out of range")
            column[edge] = 1.0
        y = int(y_part)
        if y not in (0, 1):
            raise InputError(f"{path}:{lineno}: response must be 0 or 1, got {y}")
        columns.append(column)
        responses.append(float(y))
    X = np.column_stack(columns) if columns else np.zeros((n_edges, 0))
    return {
        "X": X,
        "y": np.array(responses, dtype=float),
        "cutoff": cutoff,
        "sigma2": sigma2,
    }


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(format_value(v) for v in row) + "\n")


def read_config_file(path: str) -> List[str]:
    """
    key=value config file turned into argv tokens (`--key value`). Boolean
    `true` values become bare flags; `false` drops the key.
    """
    if not os.path.exists(path):
        raise InputError(f"config file not found: {path}")
    tokens: List[str] = []
    with open(path, "r") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InputError(f"{path}:{lineno}: expected key=value")
            flag = "--" + key.strip().lstrip("-").replace("_", "-")
            value = value.strip()
            if value.lower() == "true":
                tokens.append(flag)
            elif value.lower() == "false":
                continue
            else:
                tokens.extend([flag] + shlex.split(value))
    return tokens
