"""JSON/CSV interchange for states, metrics, and reports (schema "qig/1").

Complex matrices travel as row-major interleaved [re, im, re, im, ...] lists.
File writes go through a temp file and an atomic rename so a failed command
never leaves a partial output behind.
"""

import json
import os
import tempfile

import numpy as np

from .errors import BadParams
from .metric import MetricTensor
from .states import DensityMatrix, ProbabilityVector, UnfoldedState

SCHEMA = "qig/1"


def _interleave(mat: np.ndarray) -> list[float]:
    flat = np.asarray(mat, dtype=complex).reshape(-1)
    out = np.empty(2 * flat.size)
    out[0::2] = flat.real
    out[1::2] = flat.imag
    return [float(x) for x in out]


def _deinterleave(entries, dim: int) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.size != 2 * dim * dim:
        raise BadParams(f"expected {2 * dim * dim} entries for dim {dim}, got {arr.size}")
    return (arr[0::2] + 1j * arr[1::2]).reshape(dim, dim)


def density_matrix_to_dict(rho: DensityMatrix) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "density_matrix",
        "dim": rho.n,
        "entries": _interleave(rho.mat),
    }


def density_matrix_from_dict(data: dict) -> DensityMatrix:
    if data.get("kind") != "density_matrix":
        raise BadParams(f"not a density_matrix payload: {data.get('kind')!r}")
    return DensityMatrix(_deinterleave(data["entries"], int(data["dim"])))


def unfolded_state_to_dict(s: UnfoldedState) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "unfolded_state",
        "dim": s.n,
        "u": _interleave(s.u),
        "p": [float(x) for x in s.p.p],
    }


def unfolded_state_from_dict(data: dict) -> UnfoldedState:
    if data.get("kind") != "unfolded_state":
        raise BadParams(f"not an unfolded_state payload: {data.get('kind')!r}")
    dim = int(data["dim"])
    return UnfoldedState(
        _deinterleave(data["u"], dim), ProbabilityVector(np.asarray(data["p"], float))
    )


def metric_tensor_to_dict(g: MetricTensor, params: dict | None = None) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "metric_tensor",
        "n": g.n,
        "params": params if params is not None else {"label": g.label},
        "transversal": [float(x) for x in g.transversal.reshape(-1)],
        "tangential": [float(x) for x in g.tangential.reshape(-1)],
        "basis": g.basis_id,
    }


def checks_to_dict(checks) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "verification_report",
        "passed": all(c.passed for c in checks),
        "checks": [
            {
                "name": c.name,
                "value": float(c.value),
                "tolerance": float(c.tolerance),
                "passed": bool(c.passed),
            }
            for c in checks
        ],
    }


def dpi_result_to_dict(result) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "dpi_scan",
        "grid": [
            {
                "q": pt.q,
                "z": pt.z,
                "trials": pt.trials,
                "violations": pt.violations,
                "worst_gap": pt.worst_gap,
                "eps_mixed": pt.eps_mixed,
            }
            for pt in result.grid
        ],
    }


def dpi_result_to_csv(result) -> str:
    lines = ["q,z,trials,violations,worst_gap,eps_mixed"]
    for pt in result.grid:
        lines.append(
            f"{pt.q!r},{pt.z!r},{pt.trials},{pt.violations},{pt.worst_gap!r},{pt.eps_mixed}"
        )
    return "\n".join(lines) + "\n"


def dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_text_atomic(path: str, text: str) -> None:
    """Write via temp file + rename; no partial file survives a failure."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qig-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
