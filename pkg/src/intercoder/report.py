"""Reliability reports: assembly from the library, JSON and Markdown rendering.

Renderers are deterministic: identical reports give identical bytes.
"""

from __future__ import annotations

import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

from . import classic
from .alpha import universal_alpha
from .metrics import DISCRETE, LabelMetric
from .model import CodingProject, LabelledJudgements, Segment, unitize
from .results import AgreementResult, NAReason
from .variants import (
    CU,
    CU_GLOBAL,
    DOMAIN_BINARY,
    GLOBAL_BINARY,
    SUBSET_WARNING,
    VariantSpec,
    compute_variants,
    is_subset_selection,
)

DISPLAY = {
    "percent": "percent agreement",
    "holsti": "Holsti index",
    "scott_pi": "Scott's π",
    "cohen_kappa": "Cohen's κ",
    "fleiss_kappa": "Fleiss' κ",
    "alpha": "α",
    GLOBAL_BINARY: "α_binary^gl",
    DOMAIN_BINARY: "α_binary",
    CU: "cu-α",
    CU_GLOBAL: "Cu-α",
}

CLASSIC = {
    "percent": classic.percent_agreement,
    "pi": classic.scott_pi,
    "kappa": classic.cohen_kappa,
    "fleiss": classic.fleiss_kappa,
}
CLASSIC_ALL = ("percent", "pi", "kappa", "fleiss")


@dataclass
class Report:
    title: str
    coefficients: list[AgreementResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def has_not_available(self) -> bool:
        return any(not c.available for c in self.coefficients)


def classic_report(ratings: classic.NominalRatings, which: Sequence[str] = CLASSIC_ALL, title="classic coefficients") -> Report:
    """Two-coder and Fleiss coefficients on single-label ratings.

    Raises :class:`classic.UnsupportedError` when a requested coefficient does
    not fit the number of coders.
    """
    report = Report(title, diagnostics={"items": ratings.m, "coders": ratings.n, "categories": list(ratings.categories)})
    for name in which:
        report.coefficients.append(CLASSIC[name](ratings))
    return report


def holsti_report(project: CodingProject, coders: Optional[Sequence[str]] = None) -> Report:
    """Holsti index between two coders' coded spans in a project."""
    coders = tuple(coders or project.coder_ids)
    if len(coders) != 2:
        raise classic.UnsupportedError(f"the Holsti index is defined for exactly two coders, got {len(coders)}")
    quotes = {q.id: q for q in project.quotations}
    spans = {c: set() for c in coders}
    for app in project.applications:
        if app.coder_id in spans:
            q = quotes[app.quotation_id]
            spans[app.coder_id].add((q.document_id, q.start, q.end))
    result = classic.holsti_index(sorted(spans[coders[0]]), sorted(spans[coders[1]]))
    return Report("Holsti index", [result], diagnostics={"coders": list(coders)})


def alpha_report(judgements: LabelledJudgements, metric: LabelMetric = DISCRETE) -> Report:
    return Report(
        "universal alpha",
        [universal_alpha(judgements, metric)],
        diagnostics={"metric": metric.kind, "items": len(judgements.items), "coders": len(judgements.coders)},
    )


def coverage(project: CodingProject, segments: Optional[list[Segment]] = None) -> dict:
    """Per coder and code: times applied, units covered, share of the corpus in percent."""
    if segments is None:
        segments = unitize(project)
    total = project.total_length
    applied: dict = defaultdict(int)
    units: dict = defaultdict(int)
    for app in project.applications:
        applied[app.coder_id, app.code_id] += 1
    for seg in segments:
        for coder, codes in seg.codes.items():
            for code in codes:
                units[coder, code] += seg.length
    rows = []
    for coder in project.coder_ids:
        for domain in project.codebook.domains:
            for code in domain.code_ids:
                if applied[coder, code] == 0:
                    continue
                u = units[coder, code]
                rows.append(
                    {
                        "coder": coder,
                        "domain": domain.id,
                        "code": code,
                        "applied": applied[coder, code],
                        "units": u,
                        "coverage_pct": round(100 * u / total, 3) if total else 0.0,
                    }
                )
    return {"total_units": total, "rows": rows}


def variant_specs(
    project: CodingProject,
    domains: Optional[Sequence[str]] = None,
    kinds: Iterable[str] = (DOMAIN_BINARY, CU, GLOBAL_BINARY, CU_GLOBAL),
) -> list[VariantSpec]:
    """Per-domain specs for each selected domain, then the global ones."""
    kinds = tuple(kinds)
    selected = tuple(domains) if domains is not None else project.codebook.domain_ids
    specs = []
    for domain in selected:
        for kind in (DOMAIN_BINARY, CU):
            if kind in kinds:
                specs.append(VariantSpec(kind, domain))
    for kind in (GLOBAL_BINARY, CU_GLOBAL):
        if kind in kinds:
            specs.append(VariantSpec(kind, domains=tuple(domains) if domains is not None else None))
    return specs


def variants_report(
    project: CodingProject,
    domains: Optional[Sequence[str]] = None,
    kinds: Iterable[str] = (DOMAIN_BINARY, CU, GLOBAL_BINARY, CU_GLOBAL),
    metric: LabelMetric = DISCRETE,
    title: str = "alpha variants",
) -> Report:
    kinds = tuple(kinds)
    segments = unitize(project)
    specs = variant_specs(project, domains, kinds)
    results = compute_variants(project, specs, metric)
    warnings = []
    if is_subset_selection(project, domains) and (GLOBAL_BINARY in kinds or CU_GLOBAL in kinds):
        missing = [d for d in project.codebook.domain_ids if d not in set(domains)]
        warnings.append(
            f"{SUBSET_WARNING}: selection {', '.join(domains)} leaves out {', '.join(missing)}; "
            "global coefficients are only meaningful over the whole codebook"
        )
    return Report(
        title,
        results,
        warnings,
        {
            "documents": len(project.documents),
            "coders": list(project.coder_ids),
            "domains": list(domains) if domains is not None else list(project.codebook.domain_ids),
            "coverage": coverage(project, segments),
        },
    )


# -- rendering ---------------------------------------------------------------


def _entry(result: AgreementResult) -> dict:
    out: dict[str, Any] = {"kind": result.kind}
    if result.domain is not None:
        out["domain"] = result.domain
    if result.available:
        out["value"] = result.value
    else:
        out["na_reason"] = result.na_reason.value
    out["d_o"] = result.observed_disagreement
    out["d_e"] = result.expected_disagreement
    out["verdict"] = result.verdict.value
    if result.band is not None:
        out["band"] = result.band
    out["n_paired_items"] = result.n_paired_items
    out["warnings"] = list(result.warnings)
    out["details"] = result.details
    return out


def report_to_dict(report: Report) -> dict:
    return {
        "title": report.title,
        "coefficients": [_entry(c) for c in report.coefficients],
        "warnings": list(report.warnings),
        "diagnostics": report.diagnostics,
    }


def report_from_dict(doc: dict) -> Report:
    coefficients = []
    for e in doc.get("coefficients", []):
        coefficients.append(
            AgreementResult(
                e["kind"],
                value=e.get("value"),
                na_reason=NAReason(e["na_reason"]) if "na_reason" in e else None,
                observed_disagreement=e.get("d_o"),
                expected_disagreement=e.get("d_e"),
                n_paired_items=e.get("n_paired_items"),
                domain=e.get("domain"),
                band=e.get("band"),
                warnings=list(e.get("warnings", [])),
                details=e.get("details", {}),
            )
        )
    return Report(doc.get("title", ""), coefficients, list(doc.get("warnings", [])), doc.get("diagnostics", {}))


def parse_report(data) -> Report:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return report_from_dict(json.loads(data))


def precision() -> int:
    raw = os.environ.get("ICA_REPORT_PRECISION", "3")
    try:
        return max(0, int(raw))
    except ValueError:
        return 3


def format_value(result: AgreementResult, digits: Optional[int] = None) -> str:
    if not result.available:
        return f"N/A ({result.na_reason.text})"
    digits = precision() if digits is None else digits
    return f"{result.value:.{digits}f}"


def _num(x, digits: int) -> str:
    if x is None:
        return "-"
    if isinstance(x, int) or float(x).is_integer():
        return str(int(x))
    return f"{x:.{digits}f}"


def _matrix(title: str, labels: Sequence[str], rows, digits: int) -> list[str]:
    lines = [f"{title}:", "", "| | " + " | ".join(labels) + " |", "|---" * (len(labels) + 1) + "|"]
    for label, row in zip(labels, rows):
        lines.append(f"| {label} | " + " | ".join(_num(x, digits) for x in row) + " |")
    lines.append("")
    return lines


def render_markdown(report: Report) -> str:
    digits = precision()
    lines = [f"# {report.title}", ""]
    if report.warnings:
        for w in report.warnings:
            lines.append(f"> WARNING: {w}")
        lines.append("")
    lines += ["| coefficient | domain | value | verdict | D_o | D_e |", "|---|---|---|---|---|---|"]
    for c in report.coefficients:
        verdict = c.verdict.label + (f", {c.band}" if c.band else "")
        lines.append(
            f"| {DISPLAY.get(c.kind, c.kind)} | {c.domain or ''} | {format_value(c, digits)} | {verdict} "
            f"| {_num(c.observed_disagreement, digits)} | {_num(c.expected_disagreement, digits)} |"
        )
    lines.append("")
    for c in report.coefficients:
        for w in c.warnings:
            lines.append(f"> WARNING ({DISPLAY.get(c.kind, c.kind)}): {w}")
    if any(c.warnings for c in report.coefficients):
        lines.append("")
    for c in report.coefficients:
        d = c.details
        name = DISPLAY.get(c.kind, c.kind) + (f" {c.domain}" if c.domain else "")
        labels = d.get("labels")
        if labels and len(labels) <= 12 and "observed" in d:
            lines += _matrix(f"Observed coincidences, {name}", labels, d["observed"], digits)
            if "expected" in d:
                lines += _matrix(f"Expected coincidences, {name}", labels, d["expected"], digits)
        if "contingency" in d:
            cats = report.diagnostics.get("categories") or [str(i) for i in range(len(d["contingency"]))]
            lines += _matrix(f"Contingency matrix, {name} (rows: second coder)", cats, d["contingency"], digits)
    cov = report.diagnostics.get("coverage")
    if cov and cov["rows"]:
        lines += [
            f"Coverage over {cov['total_units']} units:",
            "",
            "| coder | domain | code | applied | units | coverage % |",
            "|---|---|---|---|---|---|",
        ]
        for r in cov["rows"]:
            lines.append(
                f"| {r['coder']} | {r['domain']} | {r['code']} | {r['applied']} | {r['units']} | {r['coverage_pct']:.3f} |"
            )
        lines.append("")
    return "\n".join(lines)


def render_report(report: Report, fmt: str = "markdown") -> bytes:
    if fmt == "json":
        return (json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "markdown":
        return render_markdown(report).encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")
