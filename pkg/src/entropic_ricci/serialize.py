"""Reading chain descriptions and writing reports.

Floats are written with 17 significant digits so every value round-trips.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .chain import GraphSpec, MarkovChain, build_srw, from_kernel


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if not any(ch in text for ch in ".eE"):
        text += ".0"
    return text


def dumps(obj, indent: int | None = None) -> str:
    """``json.dumps`` with 17-significant-digit floats (numpy scalars and arrays included)."""

    def enc(o, level):
        pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
        end = "" if indent is None else "\n" + " " * (indent * level)
        sep = ", " if indent is None else ","
        if isinstance(o, np.ndarray):
            o = o.tolist()
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if o is None:
            return "null"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return format_float(o)
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [pad + json.dumps(str(k)) + ": " + enc(v, level + 1) for k, v in o.items()]
            return "{" + sep.join(items) + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            return "[" + sep.join(pad + enc(v, level + 1) for v in o) + end + "]"
        raise TypeError(f"cannot serialise {type(o).__name__}")

    return enc(obj, 0)


def load_chain(path: str | Path) -> MarkovChain:
    """Read a graph (``{"n", "edges", "labels"?}``) or kernel (``{"Q"}``) JSON file.

    Graphs become simple random walks.
    """
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    if "Q" in data:
        return from_kernel(data["Q"], **({"tol": float(data["tol"])} if "tol" in data else {}))
    if "n" in data and "edges" in data:
        return build_srw(GraphSpec.from_dict(data))
    raise ValueError(f"{path}: expected a graph object with 'n' and 'edges' or a kernel object with 'Q'")


def write_graph(g: GraphSpec, path: str | Path) -> None:
    Path(path).write_text(dumps(g.to_dict(), indent=2) + "\n")


def samples_to_jsonl(samples) -> str:
    return "".join(dumps(s.to_dict()) + "\n" for s in samples)


SAMPLE_COLUMNS = ("kind", "lhs", "rhs", "residual", "slack", "pass", "note", "inputs")
SUMMARY_COLUMNS = ("kind", "samples", "failures", "worst_residual")


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    if isinstance(v, (dict, list)):
        return dumps(v)
    return v


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in columns})
    return buf.getvalue()


def read_jsonl(path: str | Path) -> list[dict]:
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if line.strip():
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return rows
