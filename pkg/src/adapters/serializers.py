"""
Rendering of results as versioned CSV or JSON documents.

Every CSV document starts with the version line, then a header row. Infinity
is always written as "inf".
"""

import csv
import io
import json
from typing import Any, Iterable, List, Mapping, Optional, Sequence

from pydantic import BaseModel

from src.config import settings
from src.domain.models import Infinity
from src.domain.value_objects import (DiagonalityVerdict, GirthReport,
                                      HomologyTable, MagnitudeSeries,
                                      TheoremReport)


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, Infinity):
        return settings.INFINITY_TOKEN
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if value == float("inf"):
            return settings.INFINITY_TOKEN
        return format(value, ".10g")
    if isinstance(value, tuple):
        return "-".join(format_cell(v) for v in value)
    if isinstance(value, list):
        return ";".join(format_cell(v) for v in value)
    if isinstance(value, dict):
        return ";".join(f"{k}:{format_cell(v)}" for k, v in sorted(value.items()))
    return str(value)


def write_csv(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    buffer.write(settings.CSV_HEADER + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


def models_to_csv(models: Sequence[BaseModel], columns: Optional[Sequence[str]] = None) -> str:
    if columns is None:
        columns = list(type(models[0]).model_fields) if models else []
    return write_csv((dict(m) for m in models), columns)


def to_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2)


def dumps_json(document: Any) -> str:
    return json.dumps(document, indent=2, default=format_cell)


def homology_csv(table: HomologyTable) -> str:
    rows: List[Mapping[str, Any]] = [
        {"scope": "total", "vertex": None, "k": e.k, "l": e.length, "rank": e.rank, "torsion": e.torsion}
        for e in table.entries
    ]
    for e in table.per_vertex or ():
        rows.append({"scope": "vertex", "vertex": e.vertex, "k": e.k, "l": e.length, "rank": e.rank})
    for length in table.incomplete_lengths:
        rows.append({"scope": "incomplete", "l": length})
    return write_csv(rows, ["scope", "vertex", "k", "l", "rank", "torsion"])


def girth_csv(report: GirthReport) -> str:
    rows: List[Mapping[str, Any]] = [{"kind": "graph", "locus": "G", "girth": report.girth}]
    rows += [{"kind": "vertex", "locus": x, "girth": value} for x, value in enumerate(report.vertex_girth)]
    rows += [{"kind": "edge", "locus": (e.u, e.v), "girth": e.girth} for e in report.edge_girth]
    return write_csv(rows, ["kind", "locus", "girth"])


def verdict_csv(verdict: DiagonalityVerdict) -> str:
    rows: List[Mapping[str, Any]] = [
        {"scope": "graph", "component": None, "verdict": verdict.label, "certificate": verdict.certificate.describe()}
    ]
    for cv in verdict.components:
        label = f"DiagonalUpTo({cv.upto})" if cv.verdict == "DiagonalUpTo" else cv.verdict
        rows.append({
            "scope": "component",
            "component": cv.component,
            "verdict": label,
            "certificate": cv.certificate.describe(),
        })
    return write_csv(rows, ["scope", "component", "verdict", "certificate"])


def magnitude_csv(series: MagnitudeSeries) -> str:
    return write_csv(
        ({"l": length, "chi": chi} for length, chi in enumerate(series.coefficients)),
        ["l", "chi"],
    )


def theorem_csv(report: TheoremReport) -> str:
    return models_to_csv(
        report.instances,
        ["theorem", "locus", "k", "length", "expected", "observed", "passed"],
    )


def experiment_csv(rows: Sequence[BaseModel]) -> str:
    """Rows of possibly different kinds under the union of their columns."""
    columns: List[str] = ["kind"]
    for row in rows:
        for name in type(row).model_fields:
            if name not in columns:
                columns.append(name)
    return write_csv(({"kind": type(row).__name__, **dict(row)} for row in rows), columns)


def trials_csv(records: Iterable[Mapping[str, Any]]) -> str:
    columns = [
        "n", "c", "p", "trial", "verdict", "certificate", "edge_count", "components",
        "circuit_rank", "tree_vertices", "cycle_counts", "ranks", "magnitude", "pawful",
    ]
    return write_csv(records, columns)
