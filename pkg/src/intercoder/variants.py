"""The four alpha variants, as relabellings of a coding project.

Each relabelling unitizes the project, turns every segment into an item
weighted by its length, and maps each coder's codes on it to labels:

* ``global_binary``  -- coded at all (1) or not (0), over the selected domains
* ``domain_binary``  -- applied some code of one domain (1) or not (0)
* ``cu``             -- which code of one domain, empty if none
* ``Cu``             -- the set of domains applied
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .alpha import universal_alpha
from .metrics import DISCRETE, LabelMetric
from .model import CodingProject, LabelledJudgements, Segment, unitize
from .results import AgreementResult

GLOBAL_BINARY = "global_binary"
DOMAIN_BINARY = "domain_binary"
CU = "cu"
CU_GLOBAL = "Cu"
KINDS = (GLOBAL_BINARY, DOMAIN_BINARY, CU, CU_GLOBAL)
GLOBAL_KINDS = (GLOBAL_BINARY, CU_GLOBAL)

SUBSET_WARNING = "global coefficients computed on domain subset"


class UnknownDomainError(KeyError):
    def __str__(self) -> str:
        return f"unknown semantic domain {self.args[0]!r}"


@dataclass(frozen=True)
class VariantSpec:
    """Which coefficient to compute.

    ``domain_id`` is required for the per-domain kinds. ``domains`` restricts
    the global kinds to a selection of domains (default: the whole codebook).
    """

    kind: str
    domain_id: Optional[str] = None
    domains: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown variant {self.kind!r}; expected one of {KINDS}")
        if self.kind in (DOMAIN_BINARY, CU) and self.domain_id is None:
            raise ValueError(f"variant {self.kind} needs a domain_id")


def _check_domains(project: CodingProject, domains: Iterable[str]) -> tuple[str, ...]:
    known = project.codebook.domain_ids
    domains = tuple(domains)
    for d in domains:
        if d not in known:
            raise UnknownDomainError(d)
    return domains


def _relabel(
    project: CodingProject,
    labels: Sequence[str],
    label_fn: Callable[[frozenset[str]], frozenset[int]],
    segments: Optional[list[Segment]] = None,
) -> LabelledJudgements:
    if segments is None:
        segments = unitize(project)
    judgements = {}
    weights = {}
    items = []
    for seg in segments:
        items.append(seg.id)
        weights[seg.id] = seg.length
        for coder in project.coder_ids:
            judgements[(coder, seg.id)] = label_fn(seg.codes.get(coder, frozenset()))
    return LabelledJudgements(tuple(labels), tuple(items), project.coder_ids, judgements, weights)


_VOTED = frozenset({0})  # index of label "1"
_NOT_VOTED = frozenset({1})


def relabel_global_binary(
    project: CodingProject, domains: Optional[Iterable[str]] = None, segments=None
) -> LabelledJudgements:
    """Label 1 where a coder applied any code of the selected domains, else 0."""
    domains = project.codebook.domain_ids if domains is None else _check_domains(project, domains)
    selected = {c for d in domains for c in project.codebook.domain(d).code_ids}
    return _relabel(project, ("1", "0"), lambda codes: _VOTED if codes & selected else _NOT_VOTED, segments)


def relabel_domain_binary(project: CodingProject, domain_id: str, segments=None) -> LabelledJudgements:
    """Label 1 where a coder applied some code of the domain, 0 elsewhere (uncoded matter included)."""
    _check_domains(project, [domain_id])
    codes = set(project.codebook.domain(domain_id).code_ids)
    return _relabel(project, ("1", "0"), lambda applied: _VOTED if applied & codes else _NOT_VOTED, segments)


def relabel_cu(project: CodingProject, domain_id: str, segments=None) -> LabelledJudgements:
    _check_domains(project, [domain_id])
    code_ids = project.codebook.domain(domain_id).code_ids
    index = {c: i for i, c in enumerate(code_ids)}
    return _relabel(
        project,
        code_ids,
        lambda applied: frozenset(index[c] for c in applied if c in index),
        segments,
    )


def relabel_Cu(project: CodingProject, domains: Optional[Iterable[str]] = None, segments=None) -> LabelledJudgements:
    """Label each segment with the set of domains a coder applied; may be multi-valued."""
    domains = project.codebook.domain_ids if domains is None else _check_domains(project, domains)
    index = {d: i for i, d in enumerate(domains)}
    domain_of = project.codebook.domain_of()
    return _relabel(
        project,
        domains,
        lambda applied: frozenset(index[domain_of[c]] for c in applied if domain_of.get(c) in index),
        segments,
    )


def relabel(project: CodingProject, spec: VariantSpec, segments=None) -> LabelledJudgements:
    if spec.kind == GLOBAL_BINARY:
        return relabel_global_binary(project, spec.domains, segments)
    if spec.kind == DOMAIN_BINARY:
        return relabel_domain_binary(project, spec.domain_id, segments)
    if spec.kind == CU:
        return relabel_cu(project, spec.domain_id, segments)
    return relabel_Cu(project, spec.domains, segments)


def is_subset_selection(project: CodingProject, domains: Optional[Iterable[str]]) -> bool:
    if domains is None:
        return False
    return set(domains) != set(project.codebook.domain_ids)


def compute_variant(
    project: CodingProject,
    spec: VariantSpec,
    metric: LabelMetric = DISCRETE,
    segments=None,
) -> AgreementResult:
    judgements = relabel(project, spec, segments)
    result = universal_alpha(judgements, metric, kind=spec.kind, domain=spec.domain_id)
    if spec.kind in GLOBAL_KINDS and is_subset_selection(project, spec.domains):
        result.warnings.append(f"{SUBSET_WARNING} ({', '.join(spec.domains)})")
    return result


def compute_variants(
    project: CodingProject,
    specs: Iterable[VariantSpec],
    metric: LabelMetric = DISCRETE,
) -> list[AgreementResult]:
    """Compute several variants over one shared unitization."""
    segments = unitize(project)
    return [compute_variant(project, spec, metric, segments) for spec in specs]
