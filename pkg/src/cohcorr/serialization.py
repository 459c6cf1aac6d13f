"""JSON encodings for states, channels and matrices.

Complex entries are explicit ``[re, im]`` pairs; matrices are row-major with
the a-major index convention for bipartite systems (|i>|j> -> i * d_b + j).
Floats are written with Python's shortest round-trip repr, so
write -> read -> write is byte-identical.
"""

import json
from pathlib import Path

import numpy as np

from .channels import channel_from_kraus
from .errors import ValidationError
from .states import BipartiteState, density_from_matrix


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data):
    try:
        a = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix is not a nested array of [re, im] pairs: {exc}") from None
    if a.ndim != 3 or a.shape[2] != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"matrix must have shape (rows, cols, 2), got {a.shape}")
    # reinterpret the pairs so signed zeros survive (re + 1j * im would not)
    return np.ascontiguousarray(a).view(complex)[..., 0]


def dumps(obj):
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def state_to_dict(rho):
    if isinstance(rho, BipartiteState):
        dims = [rho.d_a, rho.d_b]
    else:
        dims = [rho.dim]
    return {"dims": dims, "matrix": encode_matrix(rho.matrix)}


def state_from_dict(data, tol=1e-10):
    if not isinstance(data, dict) or "dims" not in data or "matrix" not in data:
        raise ValidationError("state file needs 'dims' and 'matrix'")
    dims = data["dims"]
    if not isinstance(dims, list) or len(dims) not in (1, 2) or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise ValidationError(f"'dims' must be a list of 1 or 2 positive integers, got {dims!r}")
    m = decode_matrix(data["matrix"])
    side = int(np.prod(dims))
    if m.shape != (side, side):
        raise ValidationError(f"matrix shape {m.shape} does not match dims {dims}")
    rho = density_from_matrix(m, tol)
    if len(dims) == 2:
        return BipartiteState(rho, dims[0], dims[1])
    return rho


def channel_to_dict(channel):
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [encode_matrix(k) for k in channel.kraus],
    }


def channel_from_dict(data, tol=1e-9):
    if not isinstance(data, dict) or not {"dim_in", "dim_out", "kraus"} <= set(data):
        raise ValidationError("channel file needs 'dim_in', 'dim_out' and 'kraus'")
    ops = [decode_matrix(k) for k in data["kraus"]]
    if not ops:
        raise ValidationError("channel file has no Kraus operators")
    for k in ops:
        if k.shape != (data["dim_out"], data["dim_in"]):
            raise ValidationError(f"Kraus operator shape {k.shape} != ({data['dim_out']}, {data['dim_in']})")
    return channel_from_kraus(ops, tol, tag="file")


def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def load_state(path, tol=1e-10):
    return state_from_dict(_read_json(path), tol)


def load_channel(path, tol=1e-9):
    return channel_from_dict(_read_json(path), tol)


def load_unitary(path):
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("matrix")
    return decode_matrix(data)


def save(obj, path):
    Path(path).write_text(dumps(obj))
