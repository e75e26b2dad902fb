"""Coefficient files and table writers used by the command-line interface.

Coefficient files hold one node per row::

    # p q r
    1.0 0.0 1.0
    ...

Eigenvalue tables are written as ``index,lambda`` CSV (or the equivalent
JSON), eigenfunctions as ``x,y1,y2,...`` blocks in a sibling file.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .exceptions import DomainError, FormatError

__all__ = [
    "CoefficientTable",
    "load_coefficients",
    "write_coefficients",
    "fmt",
    "eigenvalue_table",
    "eigenfunction_table",
    "diffusion_table",
]

HEADER = ("p", "q", "r")


class CoefficientTable(NamedTuple):
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray

    @property
    def n_intervals(self) -> int:
        return len(self.p) - 1


def load_coefficients(path) -> CoefficientTable:
    """Parse a ``# p q r`` coefficient file and validate positivity of ``p`` and ``r``."""
    rows = []
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if not header_seen:
                if line.startswith("#") and tuple(line[1:].split()) == HEADER:
                    header_seen = True
                    continue
                raise FormatError("expected header '# p q r'", lineno)
            if line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise FormatError(f"expected 3 columns, found {len(parts)}", lineno)
            try:
                values = [float(v) for v in parts]
            except ValueError as exc:
                raise FormatError(f"non-numeric entry ({exc})", lineno) from None
            if not all(np.isfinite(values)):
                raise FormatError("non-finite entry", lineno)
            if values[0] <= 0:
                raise DomainError(f"row {len(rows)} (line {lineno}): p = {values[0]} must be positive")
            if values[2] <= 0:
                raise DomainError(f"row {len(rows)} (line {lineno}): r = {values[2]} must be positive")
            rows.append(values)
    if not header_seen:
        raise FormatError("empty coefficient file", 1)
    if len(rows) < 3:
        raise FormatError(f"need at least 3 node rows (N >= 2), found {len(rows)}")
    arr = np.array(rows)
    return CoefficientTable(arr[:, 0], arr[:, 1], arr[:, 2])


def write_coefficients(path, p, q, r) -> None:
    p, q, r = (np.asarray(v, dtype=float) for v in (p, q, r))
    lines = ["# p q r"]
    lines += [f"{a!r} {b!r} {c!r}" for a, b, c in zip(p.tolist(), q.tolist(), r.tolist())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def fmt(value: float) -> str:
    """Ten significant digits, keeping trailing zeros."""
    return format(float(value) + 0.0, "#.10g")


def _round(value: float) -> float:
    return float(fmt(value))


def eigenvalue_table(eigenvalues, output_format: str, meta: dict | None = None) -> str:
    if output_format == "csv":
        lines = ["index,lambda"]
        lines += [f"{i},{fmt(v)}" for i, v in enumerate(eigenvalues, start=1)]
        return "\n".join(lines) + "\n"
    payload = dict(meta or {})
    payload["eigenvalues"] = [
        {"index": i, "lambda": _round(v)} for i, v in enumerate(eigenvalues, start=1)
    ]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def eigenfunction_table(nodes, modes, output_format: str) -> str:
    """``modes[k]`` holds the k-th eigenfunction at every node (boundary included)."""
    modes = np.atleast_2d(modes)
    if output_format == "csv":
        header = ",".join(["x"] + [f"y{k}" for k in range(1, len(modes) + 1)])
        lines = [header]
        for j, x in enumerate(nodes):
            lines.append(",".join([fmt(x)] + [fmt(m[j]) for m in modes]))
        return "\n".join(lines) + "\n"
    payload = {
        "x": [_round(x) for x in nodes],
        "eigenfunctions": {f"y{k}": [_round(v) for v in m] for k, m in enumerate(modes, start=1)},
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def diffusion_table(times, nodes, values, output_format: str) -> str:
    if output_format == "csv":
        lines = ["t,x,u"]
        for i, t in enumerate(times):
            for j, x in enumerate(nodes):
                lines.append(f"{fmt(t)},{fmt(x)},{fmt(values[i][j])}")
        return "\n".join(lines) + "\n"
    payload = {
        "times": [_round(t) for t in times],
        "x": [_round(x) for x in nodes],
        "u": [[_round(v) for v in row] for row in values],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
