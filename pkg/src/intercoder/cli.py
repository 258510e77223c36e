"""Command line front end.

Exit codes: 0 success, 2 input error, 3 when a requested coefficient is
not available (the report is still written).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from .classic import UnsupportedError
from .ingest import ParseError, ProjectError, parse_project, parse_reliability_csv
from .metrics import LabelMetric, MetricConfigError
from .model import validate_codebook, validate_coding
from .report import CLASSIC_ALL, Report, alpha_report, classic_report, holsti_report, render_report, variants_report
from .variants import CU, CU_GLOBAL, DOMAIN_BINARY, GLOBAL_BINARY, UnknownDomainError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NA = 3


class InputError(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _categories(arg: Optional[str]):
    return [c.strip() for c in arg.split(",")] if arg else None


def _emit(report: Report, args) -> int:
    data = render_report(report, args.format)
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_NA if report.has_not_available else EXIT_OK


def run_classic(args) -> int:
    which = [name for name in ("percent", "holsti", "pi", "kappa", "fleiss") if getattr(args, name)]
    if args.all or not which:
        which = list(CLASSIC_ALL)
    data = _read(args.input)
    if "holsti" in which:
        if len(which) > 1:
            raise InputError("--holsti works on span data (a project file) and cannot be combined with other coefficients")
        return _emit(holsti_report(parse_project(data)), args)
    ratings = parse_reliability_csv(data, _categories(args.categories))
    return _emit(classic_report(ratings, which), args)


def _parse_values(arg: Optional[str]) -> dict:
    """``Y=1,N=0`` inline, or a path to a JSON object mapping label to value."""
    if not arg:
        return {}
    if "=" not in arg:
        try:
            return json.loads(_read(arg))
        except json.JSONDecodeError as exc:
            raise InputError(f"value map {arg} is not valid JSON: {exc}") from None
    out = {}
    for part in arg.split(","):
        label, _, value = part.partition("=")
        try:
            out[label.strip()] = float(value)
        except ValueError:
            raise InputError(f"bad value {value!r} for label {label!r}") from None
    return out


def build_metric(kind: str, values: dict, degrees: bool = False) -> LabelMetric:
    if kind != "discrete" and not values:
        raise InputError(f"--metric {kind} needs a label value map (--values)")
    if kind == "angular" and degrees:
        values = {k: math.radians(v) for k, v in values.items()}
    return LabelMetric(kind, values)


def run_alpha(args) -> int:
    ratings = parse_reliability_csv(_read(args.input), _categories(args.categories))
    metric = build_metric(args.metric, _parse_values(args.values), args.degrees)
    judgements = ratings.to_judgements()
    metric.distance_matrix(judgements.labels)
    return _emit(alpha_report(judgements, metric), args)


def _kinds(args) -> list[str]:
    kinds = [k for flag, k in (("binary", DOMAIN_BINARY), ("cu", CU), ("glob", GLOBAL_BINARY), ("Cu", CU_GLOBAL)) if getattr(args, flag)]
    return kinds or [DOMAIN_BINARY, CU, GLOBAL_BINARY, CU_GLOBAL]


def run_variants(args) -> int:
    project = parse_project(_read(args.input))
    domains = None if args.all_domains or not args.domain else list(dict.fromkeys(args.domain))
    if domains:
        for d in domains:
            if d not in project.codebook.domain_ids:
                raise UnknownDomainError(d)
    metric = project.metric or LabelMetric()
    return _emit(variants_report(project, domains, _kinds(args), metric), args)


def run_report(args) -> int:
    project = parse_project(_read(args.input))
    metric = project.metric or LabelMetric()
    return _emit(variants_report(project, None, metric=metric, title="reliability report"), args)


def run_validate(args) -> int:
    project = parse_project(_read(args.input), validate=False)
    report = validate_codebook(project.codebook)
    if report.valid:
        report = validate_coding(project)
    if report.valid:
        print(f"valid: {len(project.codebook.domains)} domains, {project.codebook.n_codes} codes, "
              f"{len(project.documents)} documents ({project.total_length} units), {len(project.coders)} coders")
        return EXIT_OK
    for v in report:
        print(v)
    return EXIT_INPUT


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("markdown", "json"), default="markdown", help="report format")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intercoder", description="Inter-coder agreement coefficients.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classic", help="percent agreement, Holsti, Scott's pi, Cohen's and Fleiss' kappa")
    p.add_argument("input", help="reliability CSV (a project file for --holsti)")
    p.add_argument("--percent", action="store_true", help="percent agreement")
    p.add_argument("--holsti", action="store_true", help="Holsti index over coded spans of a project file")
    p.add_argument("--pi", action="store_true", help="Scott's pi")
    p.add_argument("--kappa", action="store_true", help="Cohen's kappa with Landis-Koch band")
    p.add_argument("--fleiss", action="store_true", help="Fleiss' kappa")
    p.add_argument("--all", action="store_true", help="percent, pi, kappa and fleiss (default)")
    p.add_argument("--categories", help="comma separated category order, e.g. Y,N")
    _add_output(p)
    p.set_defaults(func=run_classic)

    p = sub.add_parser("alpha", help="universal alpha on a reliability CSV")
    p.add_argument("input", help="reliability CSV")
    p.add_argument("--metric", choices=("discrete", "interval", "angular"), default="discrete")
    p.add_argument("--values", help="label values: 'A=1,B=2' or a JSON file")
    p.add_argument("--degrees", action="store_true", help="angular values are in degrees")
    p.add_argument("--categories", help="comma separated label order")
    _add_output(p)
    p.set_defaults(func=run_alpha)

    p = sub.add_parser("variants", help="alpha_binary, cu-alpha, alpha_binary^gl and Cu-alpha on a project")
    p.add_argument("input", help="project JSON file")
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--domain", action="append", metavar="ID", help="restrict to this domain (repeatable)")
    sel.add_argument("--all-domains", action="store_true", help="use every codebook domain (default)")
    p.add_argument("--binary", action="store_true", help="alpha_binary per domain")
    p.add_argument("--cu", action="store_true", help="cu-alpha per domain")
    p.add_argument("--global", dest="glob", action="store_true", help="alpha_binary^gl")
    p.add_argument("--Cu", action="store_true", help="Cu-alpha")
    _add_output(p)
    p.set_defaults(func=run_variants)

    p = sub.add_parser("report", help="every variant over the whole codebook, with coverage")
    p.add_argument("input", help="project JSON file")
    _add_output(p)
    p.set_defaults(func=run_report)

    p = sub.add_parser("validate", help="check a project file against the codebook rules")
    p.add_argument("input", help="project JSON file")
    p.set_defaults(func=run_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, UnsupportedError, MetricConfigError, UnknownDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
