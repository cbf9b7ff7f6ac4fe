"""Text formats shared by the library and the CLI.

Floats are written with 17 significant digits (``%.17g``), which round
trips every double and keeps output byte-stable. CSV layouts:

* configuration: header ``x1,...,xd``, one point per row;
* embedding: header ``eta_<s1>_..._<sd>`` per generator, one value row;
* dataset: header ``x<i>_<j>`` for point i, coordinate j, then ``f``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from typing import Iterable, Sequence

import numpy as np

from .basis import enumerate_generators
from .decompose import LabeledDataset
from .embed import Configuration, Embedding
from .errors import InputFormatError


def format_number(x, digits: int | None = None) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return "%.*g" % (digits or 17, x)


def dumps(obj, digits: int | None = None) -> str:
    """Compact JSON with floats in the fixed numeric format."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, float, np.integer, np.floating)):
        return format_number(obj, digits)
    if isinstance(obj, str):
        return _json_string(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{_json_string(str(k))}:{dumps(v, digits)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(dumps(v, digits) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _json_string(s: str) -> str:
    return json.dumps(s)


def _rows(text: str) -> list[list[str]]:
    return [row for row in csv.reader(io.StringIO(text)) if row and any(c.strip() for c in row)]


def _parse_float(cell: str, row: int, field: str) -> float:
    try:
        v = float(cell)
    except ValueError:
        raise InputFormatError(f"row {row}, field {field!r}: {cell!r} is not a number") from None
    if not math.isfinite(v):
        raise InputFormatError(f"row {row}, field {field!r}: {cell!r} is not finite")
    return v


def write_csv(header: Sequence[str], rows: Iterable[Sequence], digits=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([c if isinstance(c, str) else format_number(c, digits) for c in r])
    return buf.getvalue()


# -- configurations -----------------------------------------------------------

def configuration_to_csv(config: Configuration, digits=None) -> str:
    return write_csv([f"x{j + 1}" for j in range(config.d)], config.points, digits)


def configuration_from_csv(text: str) -> Configuration:
    rows = _rows(text)
    if not rows:
        raise InputFormatError("configuration CSV is empty")
    header = [h.strip() for h in rows[0]]
    expected = [f"x{j + 1}" for j in range(len(header))]
    if header != expected:
        raise InputFormatError(f"row 1 (header): expected {','.join(expected)}, got {','.join(header)}")
    if len(rows) < 2:
        raise InputFormatError("configuration CSV has no points")
    pts = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputFormatError(f"row {r}: expected {len(header)} fields, got {len(row)}")
        pts.append([_parse_float(c, r, h) for c, h in zip(row, header)])
    return Configuration(pts)


# -- embeddings ---------------------------------------------------------------

def _generator_label(s) -> str:
    return "eta_" + "_".join(str(e) for e in s)


def embedding_to_csv(e: Embedding, digits=None) -> str:
    return write_csv([_generator_label(s) for s in e.basis.order], [e.values], digits)


def embedding_from_csv(text: str) -> Embedding:
    rows = _rows(text)
    if len(rows) != 2:
        raise InputFormatError(f"embedding CSV must have a header and exactly one value row, got {len(rows)} rows")
    header = [h.strip() for h in rows[0]]
    exps = []
    for k, h in enumerate(header):
        m = re.fullmatch(r"eta((?:_\d+)+)", h)
        if not m:
            raise InputFormatError(f"row 1 (header), field {k + 1}: {h!r} is not a generator label like eta_1_0")
        exps.append(tuple(int(v) for v in m.group(1)[1:].split("_")))
    d = len(exps[0])
    n = max(sum(s) for s in exps)
    if n < 1:
        raise InputFormatError("embedding header lists no non-constant generator")
    basis = enumerate_generators(d, n, include_constant=(0,) * d in exps)
    if tuple(exps) != basis.order:
        raise InputFormatError("embedding header is not a canonical power-sum basis")
    if len(rows[1]) != len(header):
        raise InputFormatError(f"row 2: expected {len(header)} fields, got {len(rows[1])}")
    return Embedding(basis, [_parse_float(c, 2, h) for c, h in zip(rows[1], header)])


# -- Jacobian -----------------------------------------------------------------

def jacobian_to_csv(J: np.ndarray, d: int, digits=None) -> str:
    n = J.shape[1] // d
    header = [f"d_x{i + 1}_{j + 1}" for i in range(n) for j in range(d)]
    return write_csv(header, J.tolist(), digits)


# -- datasets -----------------------------------------------------------------

def dataset_header(d: int, n: int) -> list[str]:
    return [f"x{i + 1}_{j + 1}" for i in range(n) for j in range(d)] + ["f"]


def dataset_to_csv(dataset: LabeledDataset, digits=None) -> str:
    b = dataset.basis
    rows = ([c for p in x.points for c in p] + [v] for x, v in dataset.records)
    return write_csv(dataset_header(b.d, b.n), rows, digits)


def dataset_from_csv(text: str, include_constant: bool = False) -> LabeledDataset:
    rows = _rows(text)
    if not rows:
        raise InputFormatError("dataset CSV is empty")
    header = [h.strip() for h in rows[0]]
    if not header or header[-1] != "f":
        raise InputFormatError("row 1 (header): last column must be 'f'")
    idx = []
    for k, h in enumerate(header[:-1]):
        m = re.fullmatch(r"x(\d+)_(\d+)", h)
        if not m:
            raise InputFormatError(f"row 1 (header), field {k + 1}: {h!r} is not of the form x<i>_<j>")
        idx.append((int(m.group(1)), int(m.group(2))))
    if not idx:
        raise InputFormatError("row 1 (header): no coordinate columns")
    n = max(i for i, _ in idx)
    d = max(j for _, j in idx)
    if header != dataset_header(d, n):
        raise InputFormatError(f"row 1 (header): expected {','.join(dataset_header(d, n))}")
    basis = enumerate_generators(d, n, include_constant)
    records = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputFormatError(f"row {r}: expected {len(header)} fields, got {len(row)}")
        vals = [_parse_float(c, r, h) for c, h in zip(row, header)]
        pts = [vals[i * d:(i + 1) * d] for i in range(n)]
        records.append((Configuration(pts), vals[-1]))
    return LabeledDataset(basis, records)


def parse_number_list(text: str, field: str = "values") -> list[float]:
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if not parts:
        raise InputFormatError(f"{field}: empty list")
    return [_parse_float(p, 1, f"{field}[{k}]") for k, p in enumerate(parts)]
