"""JSON/CSV formats for states, witnesses, tables, reports and sweeps.

State and witness files share one schema::

    {"dims": [d_A, d_B], "matrix": [[[re, im], ...], ...]}   # row-major
"""
import csv
import io
import json

import numpy as np

from .states import DensityMatrix
from .witness import WitnessSpec


class FormatError(ValueError):
    pass


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(data):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix entries must be [re, im] pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise FormatError(f"matrix must be an n x n array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _read_operator(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc})") from None
    if not isinstance(doc, dict) or "dims" not in doc or "matrix" not in doc:
        raise FormatError(f"{path}: expected an object with 'dims' and 'matrix'")
    return tuple(int(d) for d in doc["dims"]), matrix_from_json(doc["matrix"])


def operator_to_json(M, dims):
    return {"dims": [int(d) for d in dims], "matrix": matrix_to_json(M)}


def load_state(path):
    dims, mat = _read_operator(path)
    return DensityMatrix(mat, dims)


def save_state(rho, path):
    with open(path, "w") as fh:
        json.dump(operator_to_json(rho.matrix, rho.dims), fh)


def load_witness(path):
    dims, mat = _read_operator(path)
    return WitnessSpec(mat, dims)


def witness_to_json(ws):
    doc = operator_to_json(ws.W, ws.dims)
    doc["omega"] = {"axes": ["c", "d", "z", "w"], "values": ws.omega.tolist()}
    return doc


def save_witness(ws, path):
    with open(path, "w") as fh:
        json.dump(witness_to_json(ws), fh)


TABLE_COLUMNS = ("z", "x", "y", "w", "c", "a", "b", "d", "p")


def table_to_csv(table):
    buf = io.StringIO()
    buf.write(f"# config_digest={table.digest}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for row in table.rows():
        writer.writerow([_fmt_label(v) for v in row[:-1]] + [repr(row[-1])])
    return buf.getvalue()


def table_to_json(table):
    return {
        "config_digest": table.digest,
        "columns": list(TABLE_COLUMNS),
        "rows": [[_fmt_label(v) for v in row[:-1]] + [row[-1]] for row in table.rows()],
    }


def _fmt_label(v):
    if isinstance(v, tuple):
        return ",".join(str(k) for k in v)
    return v


SWEEP_COLUMNS = ("v", "J", "I", "detected")


def sweep_to_csv(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in records:
        J = "" if r.J is None else repr(r.J)
        writer.writerow([repr(r.v), J, repr(r.I), str(r.detected).lower()])
    return buf.getvalue()


def sweep_to_json(records, **meta):
    return {**meta, "records": [r.to_dict() for r in records]}
