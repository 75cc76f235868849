"""Matrix parsers and structured emitters (JSON documents, DOT graphs).

Rationals are always serialized as exact "p/q" strings; a sibling field
with the suffix `_approx` carries a decimal string for convenience and is
explicitly approximate.
"""

from __future__ import annotations

import csv
import io as _io
from fractions import Fraction

from .cutpoints import CutSystem
from .errors import ParseError
from .metric import Metric, validate_metric
from .oracle import VerificationReport
from .realization import BlockDecomposition, RealizationGraph, blocks_and_cut_vertices


def _rat(v: Fraction) -> str:
    return str(v)


def _approx(v: Fraction) -> str:
    return repr(float(v))


def parse_matrix(data, fmt: str = "csv") -> Metric:
    """Parse a full square distance matrix and validate it as a metric.

    csv: a header row of labels, then one row per point of the form
    "label,v1,...,vn" (a leading empty header cell is tolerated).
    phylip: a count line, then "label v1 ... vn" rows.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if fmt == "csv":
        labels, rows = _parse_csv(data)
    elif fmt == "phylip":
        labels, rows = _parse_phylip(data)
    else:
        raise ParseError(f"unknown format {fmt!r}")
    return validate_metric(labels, rows)


def _parse_csv(text: str):
    reader = list(csv.reader(_io.StringIO(text)))
    reader = [row for row in reader if any(cell.strip() for cell in row)]
    if not reader:
        raise ParseError("empty input", line=1)
    header = [cell.strip() for cell in reader[0]]
    if header and header[0] == "":
        header = header[1:]
    labels = header
    n = len(labels)
    if n == 0:
        raise ParseError("no labels in header", line=1)
    if len(reader) - 1 != n:
        raise ParseError(f"expected {n} data rows, found {len(reader) - 1}", line=len(reader))
    rows = []
    for i, raw in enumerate(reader[1:], start=2):
        cells = [cell.strip() for cell in raw]
        if len(cells) != n + 1:
            raise ParseError(f"expected {n + 1} fields, found {len(cells)}", line=i)
        if cells[0] != labels[i - 2]:
            raise ParseError(
                f"row label {cells[0]!r} does not match header label {labels[i - 2]!r}",
                line=i, col=1,
            )
        rows.append(_parse_cells(cells[1:], line=i))
    return labels, rows


def _parse_phylip(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty input", line=1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError("first line must be the point count", line=1) from None
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} data rows, found {len(lines) - 1}", line=len(lines))
    labels, rows = [], []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != n + 1:
            raise ParseError(f"expected {n + 1} fields, found {len(parts)}", line=i)
        labels.append(parts[0])
        rows.append(_parse_cells(parts[1:], line=i))
    return labels, rows


def _parse_cells(cells, line):
    out = []
    for j, cell in enumerate(cells, start=2):
        try:
            out.append(Fraction(cell))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational: {cell!r}", line=line, col=j) from None
    return out


def metric_to_json(metric: Metric) -> dict:
    return {
        "labels": list(metric.labels),
        "matrix": [[_rat(v) for v in row] for row in metric.rows],
        "matrix_approx": [[_approx(v) for v in row] for row in metric.rows],
    }


def metric_from_json(doc: dict) -> Metric:
    return validate_metric(doc["labels"], doc["matrix"])


def cut_system_to_json(cs: CutSystem) -> dict:
    return {
        "labels": list(cs.metric.labels),
        "cutpoints": [
            {
                "values": [_rat(v) for v in rec.map.values],
                "values_approx": [_approx(v) for v in rec.map.values],
                "kind": rec.kind.value,
                "components": [sorted(c) for c in rec.components],
                "component_is_clique": list(rec.clique_flags),
            }
            for rec in cs.cutpoints
        ],
        "block_splits": [
            {
                "side_a": sorted(rec.split.side_a),
                "side_b": sorted(rec.split.side_b),
                "a_s": rec.a_s,
                "b_s": rec.b_s,
                "va": _rat(rec.va),
                "vb": _rat(rec.vb),
                "alpha": _rat(rec.alpha),
                "alpha_approx": _approx(rec.alpha),
            }
            for rec in cs.block_splits
        ],
    }


def realization_to_json(graph: RealizationGraph) -> dict:
    blocks, cuts = blocks_and_cut_vertices(graph)
    labeled = set(graph.labeled)
    vertices = []
    for name in graph.names:
        entry = {"name": name, "labeled": name in labeled}
        if graph.maps is not None:
            entry["values"] = [_rat(v) for v in graph.maps[name].values]
        vertices.append(entry)
    return {
        "vertices": vertices,
        "edges": [
            {"u": u, "v": v, "weight": _rat(w), "weight_approx": _approx(w)}
            for u, v, w in graph.edges
        ],
        "blocks": [sorted(b) for b in blocks],
        "cut_vertices": sorted(cuts),
    }


def realization_to_dot(graph: RealizationGraph) -> str:
    """A plain undirected DOT document with exact weights as edge labels."""
    labeled = set(graph.labeled)
    lines = ["graph block_realization {", "  node [shape=circle];"]
    for name in graph.names:
        style = "" if name in labeled else " style=dashed"
        lines.append(f'  "{name}" [label="{name}"{style}];')
    for u, v, w in graph.edges:
        lines.append(f'  "{u}" -- "{v}" [label="{_rat(w)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def decomposition_to_json(dec: BlockDecomposition) -> dict:
    labels = list(dec.graph.labeled)
    return {
        "labels": labels,
        "blocks": [
            {
                "vertices": sorted(block),
                "is_bridge": dec.bridges[bi],
                "matrix": [[_rat(v) for v in row] for row in dec.matrices[bi]],
            }
            for bi, block in enumerate(dec.blocks)
        ],
    }


def report_to_json(report: VerificationReport) -> dict:
    return {
        "overall": report.overall,
        "checks": [
            {"name": c.name, "passed": c.passed, "witness": c.witness}
            for c in report.checks
        ],
    }
