"""Readers for reliability-data CSV files and JSON project files.

CSV layout (UTF-8, comma separated)::

    coder,#01,#02,#03
    J1,N,N,Y
    J2,Y,,Y

An empty cell means the coder gave no judgement for that item.

Project files are JSON objects with the keys ``codebook``, ``documents``,
``coders``, ``quotations``, ``applications`` and optionally ``metric`` and
``unit``; see the README for the full layout.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Optional, Sequence, Union

from .classic import NominalRatings
from .metrics import LabelMetric, MetricConfigError
from .model import (
    Code,
    CodeApplication,
    Codebook,
    Coder,
    CodingProject,
    Document,
    Quotation,
    SemanticDomain,
    ValidationReport,
    Violation,
    validate_codebook,
    validate_coding,
)

Source = Union[bytes, str]


class ParseError(ValueError):
    pass


class ProjectError(ParseError):
    """A project file that parsed but broke schema or validation rules."""

    def __init__(self, report: ValidationReport):
        self.report = report
        lines = "\n".join(f"  {v}" for v in report)
        super().__init__(f"invalid project ({len(report)} problem(s)):\n{lines}")


def _text(data: Source) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    return data


def parse_reliability_csv(data: Source, categories: Optional[Sequence[str]] = None) -> NominalRatings:
    """Parse a reliability data matrix: one row per coder, one column per item.

    Categories are the distinct cell tokens in order of first appearance
    (row by row) unless ``categories`` fixes the order.
    """
    rows = [row for row in csv.reader(io.StringIO(_text(data))) if any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError("empty file")
    header = [cell.strip() for cell in rows[0]]
    if len(header) < 2 or header[0].lower() != "coder":
        raise ParseError("row 1: header must be 'coder,<item ids...>'")
    items = header[1:]
    if any(not item for item in items):
        raise ParseError("row 1: empty item id in header")
    if len(set(items)) != len(items):
        raise ParseError("row 1: duplicate item ids in header")
    table: dict[str, list[Optional[str]]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"row {lineno}: {len(row)} cells, expected {len(header)}")
        coder = row[0].strip()
        if not coder:
            raise ParseError(f"row {lineno}: empty coder id")
        if coder in table:
            raise ParseError(f"row {lineno}: duplicate coder {coder!r}")
        table[coder] = [cell.strip() or None for cell in row[1:]]
    if not table:
        raise ParseError("no coder rows")
    try:
        return NominalRatings.from_table(table, items, categories)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _get(obj: dict, key: str, where: str, kind=None, default: Any = ...):
    if not isinstance(obj, dict):
        raise ProjectError(ValidationReport((Violation("schema", f"{where} must be an object"),)))
    if key not in obj:
        if default is not ...:
            return default
        raise ProjectError(ValidationReport((Violation("schema", f"{where} is missing {key!r}"),)))
    value = obj[key]
    if kind is not None and not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ProjectError(ValidationReport((Violation("schema", f"{where}.{key} must be {name}"),)))
    return value


def parse_metric(spec: Optional[dict]) -> Optional[LabelMetric]:
    if spec is None:
        return None
    kind = _get(spec, "kind", "metric", str)
    try:
        if kind == "custom":
            return LabelMetric("custom", matrix=_get(spec, "matrix", "metric", list))
        values = _get(spec, "values", "metric", dict, default={})
        if kind == "angular" and _get(spec, "degrees", "metric", bool, default=False):
            values = {k: math.radians(v) for k, v in values.items()}
        return LabelMetric(kind, values)
    except MetricConfigError as exc:
        raise ProjectError(ValidationReport((Violation("metric-config", str(exc)),))) from None


def project_from_dict(doc: dict, validate: bool = True) -> CodingProject:
    cb = _get(doc, "codebook", "project", dict)
    domains = []
    for n, d in enumerate(_get(cb, "domains", "codebook", list)):
        codes = []
        for c in _get(d, "codes", f"domain #{n + 1}", list):
            if isinstance(c, str):
                codes.append(Code(c))
            else:
                codes.append(Code(_get(c, "id", "code", str), _get(c, "name", "code", str, default="")))
        domains.append(SemanticDomain(_get(d, "id", f"domain #{n + 1}", str), _get(d, "name", "domain", str, default=""), tuple(codes)))
    codebook = Codebook(
        tuple(domains),
        _get(cb, "version", "codebook", str, default=""),
        _get(cb, "description", "codebook", str, default=""),
    )
    documents = tuple(
        Document(_get(d, "id", "document", str), _get(d, "length", "document", int))
        for d in _get(doc, "documents", "project", list)
    )
    coders = []
    for c in _get(doc, "coders", "project", list):
        if isinstance(c, str):
            coders.append(Coder(c))
        else:
            coders.append(Coder(_get(c, "id", "coder", str), _get(c, "display_name", "coder", str, default="")))
    quotations = tuple(
        Quotation(
            _get(q, "id", "quotation", str),
            _get(q, "document_id", "quotation", str),
            _get(q, "start", "quotation", int),
            _get(q, "end", "quotation", int),
            _get(q, "coder_id", "quotation", (str, type(None)), default=None),
        )
        for q in _get(doc, "quotations", "project", list)
    )
    applications = tuple(
        CodeApplication(
            _get(a, "coder_id", "application", str),
            _get(a, "quotation_id", "application", str),
            _get(a, "code_id", "application", str),
        )
        for a in _get(doc, "applications", "project", list)
    )
    project = CodingProject(
        codebook,
        documents,
        tuple(coders),
        quotations,
        applications,
        parse_metric(doc.get("metric")),
        _get(doc, "unit", "project", str, default="characters"),
    )
    if validate:
        report = validate_codebook(codebook)
        if report.valid:
            report = validate_coding(project)
        if not report.valid:
            raise ProjectError(report)
    return project


def parse_project(data: Source, validate: bool = True) -> CodingProject:
    try:
        doc = json.loads(_text(data))
    except json.JSONDecodeError as exc:
        raise ParseError(f"project file is not valid JSON: {exc}") from None
    return project_from_dict(doc, validate)


def metric_to_dict(metric: LabelMetric) -> dict:
    if metric.kind == "custom":
        return {"kind": "custom", "matrix": [list(row) for row in metric.matrix]}
    out: dict[str, Any] = {"kind": metric.kind}
    if metric.values:
        out["values"] = dict(metric.values)
    return out


def project_to_dict(project: CodingProject) -> dict:
    out: dict[str, Any] = {
        "unit": project.unit,
        "codebook": {
            "version": project.codebook.version,
            "description": project.codebook.description,
            "domains": [
                {"id": d.id, "name": d.name, "codes": [{"id": c.id, "name": c.name} for c in d.codes]}
                for d in project.codebook.domains
            ],
        },
        "documents": [{"id": d.id, "length": d.length} for d in project.documents],
        "coders": [{"id": c.id, "display_name": c.display_name} for c in project.coders],
        "quotations": [],
        "applications": [
            {"coder_id": a.coder_id, "quotation_id": a.quotation_id, "code_id": a.code_id}
            for a in project.applications
        ],
    }
    for q in project.quotations:
        entry = {"id": q.id, "document_id": q.document_id, "start": q.start, "end": q.end}
        if q.coder_id is not None:
            entry["coder_id"] = q.coder_id
        out["quotations"].append(entry)
    if project.metric is not None:
        out["metric"] = metric_to_dict(project.metric)
    return out
