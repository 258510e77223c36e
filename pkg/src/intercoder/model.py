"""Codebook and coding data model.

A codebook is a list of semantic domains, each holding mutually exclusive
codes. A coding project ties the codebook to documents (measured in atomic
units), coders, quotations (half-open spans) and code applications.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


@dataclass(frozen=True)
class Code:
    id: str
    name: str = ""


@dataclass(frozen=True)
class SemanticDomain:
    id: str
    name: str = ""
    codes: tuple[Code, ...] = ()

    @property
    def code_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.codes)


@dataclass(frozen=True)
class Codebook:
    domains: tuple[SemanticDomain, ...]
    version: str = ""
    description: str = ""

    @property
    def domain_ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.domains)

    def domain(self, domain_id: str) -> SemanticDomain:
        for d in self.domains:
            if d.id == domain_id:
                return d
        raise KeyError(f"unknown semantic domain {domain_id!r}")

    def domain_of(self) -> dict[str, str]:
        """Map each code id to the id of its domain (first occurrence wins)."""
        out: dict[str, str] = {}
        for d in self.domains:
            for c in d.codes:
                out.setdefault(c.id, d.id)
        return out

    @property
    def n_codes(self) -> int:
        return sum(len(d.codes) for d in self.domains)


@dataclass(frozen=True)
class Coder:
    id: str
    display_name: str = ""


@dataclass(frozen=True)
class Document:
    id: str
    length: int


@dataclass(frozen=True)
class Quotation:
    """A half-open span ``[start, end)`` of a document.

    ``coder_id`` is None for pre-defined quotations shared by every coder;
    otherwise the quotation belongs to one coder's free segmentation.
    """

    id: str
    document_id: str
    start: int
    end: int
    coder_id: Optional[str] = None

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class CodeApplication:
    coder_id: str
    quotation_id: str
    code_id: str


@dataclass(frozen=True)
class CodingProject:
    codebook: Codebook
    documents: tuple[Document, ...]
    coders: tuple[Coder, ...]
    quotations: tuple[Quotation, ...] = ()
    applications: tuple[CodeApplication, ...] = ()
    metric: object = None
    unit: str = "characters"

    @property
    def coder_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.coders)

    @property
    def total_length(self) -> int:
        return sum(d.length for d in self.documents)

    def quotation(self, quotation_id: str) -> Quotation:
        for q in self.quotations:
            if q.id == quotation_id:
                return q
        raise KeyError(f"unknown quotation {quotation_id!r}")


@dataclass(frozen=True)
class LabelledJudgements:
    """Per (coder, item) label sets over a fixed label list.

    ``judgements`` maps ``(coder_id, item_id)`` to a frozenset of label
    indices; a missing key and an empty set both mean "no judgement".
    """

    labels: tuple[str, ...]
    items: tuple[str, ...]
    coders: tuple[str, ...]
    judgements: Mapping[tuple[str, str], frozenset[int]]
    weights: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        k = len(self.labels)
        for key, labels in self.judgements.items():
            if not isinstance(labels, frozenset):
                raise TypeError(f"judgement {key} must be a frozenset, got {type(labels).__name__}")
            for idx in labels:
                if not 0 <= idx < k:
                    raise ValueError(f"judgement {key} references label index {idx} outside 0..{k - 1}")
        for item, w in self.weights.items():
            if not w > 0:
                raise ValueError(f"weight of item {item!r} must be positive, got {w}")

    @property
    def k(self) -> int:
        return len(self.labels)

    def weight(self, item: str):
        return self.weights.get(item, 1)

    def judgement(self, coder: str, item: str) -> frozenset[int]:
        return self.judgements.get((coder, item), frozenset())

    @classmethod
    def from_labels(
        cls,
        data: Mapping[tuple[str, str], Iterable[str]],
        labels: Optional[Iterable[str]] = None,
        weights: Optional[Mapping[str, float]] = None,
    ) -> "LabelledJudgements":
        """Build from ``{(coder, item): [label, ...]}`` using label names."""
        if labels is None:
            seen: dict[str, None] = {}
            for names in data.values():
                for name in names:
                    seen.setdefault(name, None)
            labels = tuple(seen)
        labels = tuple(labels)
        index = {name: i for i, name in enumerate(labels)}
        coders: dict[str, None] = {}
        items: dict[str, None] = {}
        judgements = {}
        for (coder, item), names in data.items():
            coders.setdefault(coder, None)
            items.setdefault(item, None)
            judgements[(coder, item)] = frozenset(index[n] for n in names)
        return cls(labels, tuple(items), tuple(coders), judgements, dict(weights or {}))


def validate_codebook(codebook: Codebook) -> ValidationReport:
    violations = []
    seen_domains: set[str] = set()
    code_home: dict[str, str] = {}
    for d in codebook.domains:
        if d.id in seen_domains:
            violations.append(Violation("duplicate-domain", f"domain {d.id} defined more than once"))
        seen_domains.add(d.id)
        if not d.codes:
            violations.append(Violation("empty-domain", f"domain {d.id} has no codes"))
        seen_codes: set[str] = set()
        for c in d.codes:
            if c.id in seen_codes:
                violations.append(Violation("duplicate-code", f"code {c.id} repeated in domain {d.id}"))
                continue
            seen_codes.add(c.id)
            home = code_home.setdefault(c.id, d.id)
            if home != d.id:
                violations.append(
                    Violation("shared-code", f"code {c.id} in two domains ({home}, {d.id})")
                )
    return ValidationReport(tuple(violations))


def _overlaps(spans: list[Quotation]) -> list[tuple[Quotation, Quotation]]:
    clashes = []
    spans = sorted(spans, key=lambda q: (q.start, q.end, q.id))
    for i, a in enumerate(spans):
        for b in spans[i + 1:]:
            if b.start >= a.end:
                break
            clashes.append((a, b))
    return clashes


def validate_coding(project: CodingProject) -> ValidationReport:
    """Check referential integrity, span bounds, overlap rules and mutual exclusivity.

    The codebook itself is assumed valid; run :func:`validate_codebook` first.
    """
    violations = []
    coders = set()
    for c in project.coders:
        if c.id in coders:
            violations.append(Violation("duplicate-coder", f"coder {c.id} defined more than once"))
        coders.add(c.id)

    docs: dict[str, Document] = {}
    for d in project.documents:
        if d.id in docs:
            violations.append(Violation("duplicate-document", f"document {d.id} defined more than once"))
        if d.length < 0:
            violations.append(Violation("negative-length", f"document {d.id} has length {d.length}"))
        docs[d.id] = d

    quotes: dict[str, Quotation] = {}
    for q in project.quotations:
        if q.id in quotes:
            violations.append(Violation("duplicate-quotation", f"quotation {q.id} defined more than once"))
        quotes[q.id] = q
        doc = docs.get(q.document_id)
        if doc is None:
            violations.append(
                Violation("dangling-document", f"quotation {q.id} references unknown document {q.document_id}")
            )
        elif not 0 <= q.start < q.end <= doc.length:
            violations.append(
                Violation(
                    "bad-span",
                    f"quotation {q.id} span [{q.start},{q.end}) outside document {doc.id} of length {doc.length}",
                )
            )
        if q.coder_id is not None and q.coder_id not in coders:
            violations.append(
                Violation("dangling-coder", f"quotation {q.id} owned by unknown coder {q.coder_id}")
            )

    by_doc: dict[str, list[Quotation]] = defaultdict(list)
    for q in project.quotations:
        if q.coder_id is None:
            by_doc[q.document_id].append(q)
    for doc_id in sorted(by_doc):
        for a, b in _overlaps(by_doc[doc_id]):
            violations.append(
                Violation("overlapping-quotations", f"pre-defined quotations {a.id} and {b.id} overlap in {doc_id}")
            )

    domain_of = project.codebook.domain_of()
    held: dict[tuple[str, str], dict[str, str]] = defaultdict(dict)
    used: dict[str, dict[str, Quotation]] = defaultdict(dict)
    seen_apps: set[CodeApplication] = set()
    for app in project.applications:
        ok = True
        if app.coder_id not in coders:
            violations.append(Violation("dangling-coder", f"application by unknown coder {app.coder_id}"))
            ok = False
        q = quotes.get(app.quotation_id)
        if q is None:
            violations.append(
                Violation("dangling-quotation", f"application references unknown quotation {app.quotation_id}")
            )
            ok = False
        if app.code_id not in domain_of:
            violations.append(Violation("dangling-code", f"application references unknown code {app.code_id}"))
            ok = False
        if not ok:
            continue
        if q.coder_id is not None and q.coder_id != app.coder_id:
            violations.append(
                Violation(
                    "foreign-quotation",
                    f"coder {app.coder_id} coded quotation {q.id} owned by coder {q.coder_id}",
                )
            )
        if app in seen_apps:
            continue
        seen_apps.add(app)
        used[app.coder_id][q.id] = q
        domain = domain_of[app.code_id]
        slot = held[(app.coder_id, q.id)]
        if domain in slot and slot[domain] != app.code_id:
            violations.append(
                Violation(
                    "mutual-exclusivity",
                    f"coder {app.coder_id} applied codes {slot[domain]} and {app.code_id} "
                    f"of domain {domain} to quotation {q.id}",
                )
            )
        slot.setdefault(domain, app.code_id)

    # a coder's own segments may not overlap: overlap semantics are undefined
    for coder in sorted(used):
        per_doc: dict[str, list[Quotation]] = defaultdict(list)
        for q in used[coder].values():
            per_doc[q.document_id].append(q)
        for doc_id in sorted(per_doc):
            for a, b in _overlaps(per_doc[doc_id]):
                if a.coder_id is None and b.coder_id is None:
                    continue
                violations.append(
                    Violation(
                        "overlapping-segments",
                        f"coder {coder} coded overlapping quotations {a.id} and {b.id} in {doc_id}",
                    )
                )
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class Segment:
    """A unit of the common refinement: constant coding for every coder."""

    document_id: str
    start: int
    end: int
    codes: Mapping[str, frozenset[str]]

    @property
    def id(self) -> str:
        return f"{self.document_id}[{self.start}:{self.end}]"

    @property
    def length(self) -> int:
        return self.end - self.start


def unitize(project: CodingProject) -> list[Segment]:
    """Refine every document into segments on which each coder's codes are constant.

    Cut points are the document ends and the boundaries of every quotation.
    Every document is covered exactly once, uncoded gaps included; documents
    of length zero contribute nothing.
    """
    quotes = {q.id: q for q in project.quotations}
    cover: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
    for app in project.applications:
        cover[app.quotation_id][app.coder_id].add(app.code_id)

    by_doc: dict[str, list[Quotation]] = defaultdict(list)
    for q in project.quotations:
        by_doc[q.document_id].append(q)

    segments = []
    for doc in project.documents:
        if doc.length == 0:
            continue
        quoted = by_doc.get(doc.id, [])
        cuts = {0, doc.length}
        for q in quoted:
            cuts.update((q.start, q.end))
        cuts = sorted(cuts)
        # sweep: quotations sorted by start, active set maintained per segment
        quoted = sorted(quoted, key=lambda q: q.start)
        pending = 0
        active: list[Quotation] = []
        for start, end in zip(cuts, cuts[1:]):
            while pending < len(quoted) and quoted[pending].start <= start:
                active.append(quoted[pending])
                pending += 1
            active = [q for q in active if q.end > start]
            codes: dict[str, set[str]] = defaultdict(set)
            for q in active:
                for coder, code_ids in cover.get(q.id, {}).items():
                    codes[coder] |= code_ids
            segments.append(
                Segment(
                    doc.id,
                    start,
                    end,
                    {c: frozenset(codes[c]) for c in project.coder_ids if codes.get(c)},
                )
            )
    return segments


def resegment(project: CodingProject) -> CodingProject:
    """Return an equivalent project whose quotations are its own unitized segments."""
    quotations = []
    applications = []
    for seg in unitize(project):
        q = Quotation(seg.id, seg.document_id, seg.start, seg.end)
        quotations.append(q)
        for coder in project.coder_ids:
            for code in sorted(seg.codes.get(coder, ())):
                applications.append(CodeApplication(coder, q.id, code))
    return CodingProject(
        project.codebook,
        project.documents,
        project.coders,
        tuple(quotations),
        tuple(applications),
        project.metric,
        project.unit,
    )
