"""File input/output: CSV ingestion, standardization, DOT export, results CSV.

All writers emit byte-stable output for a fixed input: rows and edges
are fully sorted and floats are formatted by shortest round-trip repr.
File coordinates in error messages are 1-based over data rows and
columns (the header is row 0 territory and excluded); in-memory column
indices elsewhere in the package stay 0-based.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ConstantColumnError,
    DataError,
    DuplicateHeaderError,
    MissingValueError,
    ParseError,
)
from .graphs import CandidateSet, as_data_matrix, support_dag, validate_dag

__all__ = [
    "load_csv",
    "standardize",
    "export_dot",
    "read_dot_edges",
    "degree_summary",
    "DegreeSummary",
    "default_names",
    "write_results_csv",
    "write_weights_csv",
    "RESULTS_HEADER",
]

RESULTS_HEADER = "p,rho,n,rep,method,kl,pe,ee_a,ee_omega,w_underfit,w_smallest_correct,w_overfit,seconds"


def default_names(p: int) -> list[str]:
    return [f"x{i + 1}" for i in range(p)]


def load_csv(path) -> tuple[np.ndarray, list[str]]:
    """Read a strict numeric CSV: one header row, no missing cells.

    Returns the data matrix in file row order and the header names.
    """
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        names = [h.strip() for h in header]
        seen = set()
        for name in names:
            if name in seen:
                raise DuplicateHeaderError(name)
            seen.add(name)
        rows: list[list[float]] = []
        for r, row in enumerate(reader, start=1):
            if len(row) < len(names):
                raise MissingValueError(r, len(row) + 1)
            if len(row) > len(names):
                raise ParseError(r, len(names) + 1, ",".join(row[len(names):]))
            values = []
            for c, cell in enumerate(row, start=1):
                text = cell.strip()
                if not text:
                    raise MissingValueError(r, c)
                try:
                    values.append(float(text))
                except ValueError:
                    raise ParseError(r, c, cell) from None
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return as_data_matrix(np.array(rows)), names


def standardize(x: np.ndarray) -> np.ndarray:
    """Center to mean zero and scale to unit variance (denominator n-1)."""
    x = as_data_matrix(x)
    mean = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1)
    flat = np.nonzero(sd == 0.0)[0]
    if flat.size:
        raise ConstantColumnError(int(flat[0]))
    out = (x - mean) / sd
    out.flags.writeable = False
    return out


def export_dot(a: np.ndarray, names: list[str], path) -> None:
    """Write a coefficient matrix as a DOT digraph.

    One node per name, one edge per nonzero entry, colored blue for
    negative and orange for positive coefficients, labeled with the
    value rounded to three decimals. Output is byte-stable.
    """
    d = support_dag(a)
    if not validate_dag(d):
        raise ValueError("coefficient matrix support contains a directed cycle")
    if len(names) != d.p:
        raise ValueError(f"{len(names)} names for {d.p} nodes")
    quoted = [name.replace('"', '\\"') for name in names]
    lines = ["digraph {"]
    for name in quoted:
        lines.append(f'  "{name}";')
    a = np.asarray(a, dtype=np.float64)
    for k, j in d.edges:
        color = "blue" if a[k, j] < 0 else "orange"
        lines.append(
            f'  "{quoted[k]}" -> "{quoted[j]}" [color={color}, label="{a[k, j]:.3f}"];'
        )
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


_DOT_EDGE = re.compile(r'^\s*"(.*)"\s*->\s*"(.*)"\s*\[')


def read_dot_edges(path) -> list[tuple[str, str]]:
    """Parse edges back out of a DOT file written by :func:`export_dot`."""
    edges = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        match = _DOT_EDGE.match(line)
        if match:
            edges.append((match.group(1).replace('\\"', '"'), match.group(2).replace('\\"', '"')))
    return edges


@dataclass(frozen=True)
class DegreeSummary:
    """Per-node in/out degrees and the average (undirected-incidence) degree."""

    in_degree: tuple[int, ...]
    out_degree: tuple[int, ...]
    average_degree: float


def degree_summary(a: np.ndarray) -> DegreeSummary:
    """Degrees of the nonzero support; average degree is 2 |E| / p."""
    d = support_dag(a)
    indeg = [0] * d.p
    outdeg = [0] * d.p
    for k, j in d.edges:
        outdeg[k] += 1
        indeg[j] += 1
    return DegreeSummary(
        in_degree=tuple(indeg),
        out_degree=tuple(outdeg),
        average_degree=2.0 * d.n_edges / d.p,
    )


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats; empty string for None."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results_csv(records, path) -> None:
    """Write sorted (p, rho, n, rep, method) rows under the fixed header.

    Failed replications (records with a nonempty ``error``) are skipped;
    the wall-time column is left empty because the file's bytes are part
    of the determinism contract.
    """
    ordered = sorted(
        (r for r in records if not r.error),
        key=lambda r: (r.p, r.rho, r.n, r.rep, r.method),
    )
    lines = [RESULTS_HEADER]
    for r in ordered:
        m = r.metrics
        lines.append(
            ",".join(
                [
                    str(r.p),
                    _fmt(r.rho),
                    str(r.n),
                    str(r.rep),
                    r.method,
                    _fmt(m.kl),
                    _fmt(m.pe),
                    _fmt(m.ee_a),
                    _fmt(m.ee_omega),
                    _fmt(r.w_underfit),
                    _fmt(r.w_smallest_correct),
                    _fmt(r.w_overfit),
                    "",
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_weights_csv(path, cs: CandidateSet, w: np.ndarray) -> None:
    """Write per-candidate weights: model_index (1-based), k, weight."""
    lines = ["model_index,k,weight"]
    for idx, (mod, wm) in enumerate(zip(cs.models, w), start=1):
        lines.append(f"{idx},{mod.k},{repr(float(wm))}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
