"""CSV tables with ``#`` comment headers, JSON sidecars and state dumps.

CSV layout::

    # <free-form comment lines: units, run settings>
    col_a,col_b,...
    1.0,2.0,...

Floats are written with ``repr`` so they read back bit-exactly.
"""
from __future__ import annotations

import csv
import io
import json
import os
from typing import IO, Mapping, Sequence

import numpy as np

from .correlations import BipartiteQubitState, family_parameters, postselect_bipartite
from .fock import TwoPhotonDensityMatrix, basis_labels
from .interference import output_density_matrix

STATE_DUMP_VERSION = 1


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_table(dest: str | os.PathLike | IO[str], columns: Mapping[str, Sequence],
                comments: Sequence[str] = ()) -> None:
    names = list(columns)
    data = [list(columns[n]) for n in names]
    n_rows = {len(c) for c in data}
    if len(n_rows) > 1:
        raise ValueError("all columns must have the same length")
    close = False
    if isinstance(dest, (str, os.PathLike)):
        fh, close = open(dest, "w", newline=""), True
    else:
        fh = dest
    try:
        for line in comments:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*data):
            w.writerow([_fmt(x) for x in row])
    finally:
        if close:
            fh.close()


def read_table(src: str | os.PathLike | IO[str]) -> tuple[dict[str, np.ndarray], list[str]]:
    """Inverse of :func:`write_table`: ``(columns, comment lines)``."""
    if isinstance(src, (str, os.PathLike)):
        with open(src, newline="") as fh:
            text = fh.read()
    else:
        text = src.read()
    comments, body = [], []
    for line in text.splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    if not rows:
        raise ValueError("table has no header row")
    names, values = rows[0], rows[1:]
    cols = {}
    for i, n in enumerate(names):
        col = [v[i] for v in values]
        try:
            cols[n] = np.array([int(x) for x in col], dtype=np.int64)
        except ValueError:
            cols[n] = np.array([float(x) for x in col])
    return cols, comments


def write_json(dest: str | os.PathLike | IO[str], payload: Mapping) -> None:
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        json.dump(payload, dest, indent=2)
        dest.write("\n")


def sidecar_path(path: str | os.PathLike) -> str:
    return os.fspath(path) + ".meta.json"


def _complex_block(m: np.ndarray) -> dict:
    return {"re": np.real(m).tolist(), "im": np.imag(m).tolist()}


def state_dump(gamma: float) -> dict:
    """Full output state and post-selected two-qubit state at ``gamma``."""
    rho = output_density_matrix(gamma)
    ab = postselect_bipartite(rho)
    t, u, v, w = family_parameters(gamma)
    return {
        "version": STATE_DUMP_VERSION,
        "gamma": float(gamma),
        "basis": basis_labels(rho.m),
        "rho": _complex_block(rho.matrix),
        "postselected": {
            "basis": ["00", "01", "10", "11"],
            "partition": [[0, 1], [2, 3]],
            "success_probability": ab.success_probability,
            "matrix": _complex_block(ab.matrix),
            "params": {"t": t, "u": u, "v": v, "w": w},
        },
    }


def read_state_dump(src: str | os.PathLike | IO[str]) -> tuple[TwoPhotonDensityMatrix, BipartiteQubitState, dict]:
    """Parse a state dump into ``(full state, post-selected state, raw payload)``."""
    if isinstance(src, (str, os.PathLike)):
        with open(src) as fh:
            data = json.load(fh)
    else:
        data = json.load(src)
    rho = np.array(data["rho"]["re"]) + 1j * np.array(data["rho"]["im"])
    ps = data["postselected"]
    ab = np.array(ps["matrix"]["re"]) + 1j * np.array(ps["matrix"]["im"])
    p = ps["params"]
    full = TwoPhotonDensityMatrix(4, rho)
    bip = BipartiteQubitState(ab, params=(p["t"], p["u"], p["v"], p["w"]),
                              success_probability=ps["success_probability"])
    return full, bip, data
