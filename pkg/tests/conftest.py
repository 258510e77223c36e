from pathlib import Path

import pytest
from hypothesis import strategies as st

from intercoder import LabelledJudgements, parse_project, parse_reliability_csv

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def slr15():
    return parse_reliability_csv((FIXTURES / "slr15.csv").read_bytes(), categories=["Y", "N"])


@pytest.fixture
def p07():
    return parse_project((FIXTURES / "p07.json").read_bytes())


@st.composite
def judgement_data(draw, max_coders=4, max_items=6, max_labels=3, max_weight=5, multi=True):
    """Plain-data judgements: (labels, coders, items, {(coder, item): tuple}, weights)."""
    k = draw(st.integers(1, max_labels))
    n = draw(st.integers(2, max_coders))
    m = draw(st.integers(1, max_items))
    labels = tuple(f"l{i}" for i in range(k))
    coders = tuple(f"c{i}" for i in range(n))
    items = tuple(f"i{i}" for i in range(m))
    if multi:
        cell = st.frozensets(st.integers(0, k - 1), max_size=k)
    else:
        cell = st.one_of(st.just(frozenset()), st.integers(0, k - 1).map(lambda x: frozenset({x})))
    data = {(c, i): draw(cell) for c in coders for i in items}
    weights = {i: draw(st.integers(1, max_weight)) for i in items}
    return labels, coders, items, data, weights


def to_judgements(raw, weights=True) -> LabelledJudgements:
    labels, coders, items, data, w = raw
    return LabelledJudgements(labels, items, coders, dict(data), dict(w) if weights else {})


def project_dict(domains, documents, quotations, applications, coders=("A", "B")):
    """Compact project description: ``domains={"S1": ["a", "b"]}``, ``documents={"d": 10}``,
    ``quotations={"q1": ("d", 2, 5)}`` (add a fourth element for a coder's own span),
    ``applications=[("A", "q1", "a")]``."""
    quotes = []
    for qid, spec in quotations.items():
        q = {"id": qid, "document_id": spec[0], "start": spec[1], "end": spec[2]}
        if len(spec) > 3:
            q["coder_id"] = spec[3]
        quotes.append(q)
    return {
        "codebook": {"domains": [{"id": d, "codes": list(codes)} for d, codes in domains.items()]},
        "documents": [{"id": d, "length": n} for d, n in documents.items()],
        "coders": list(coders),
        "quotations": quotes,
        "applications": [{"coder_id": c, "quotation_id": q, "code_id": k} for c, q, k in applications],
    }


def make_project(*args, validate=True, **kwargs):
    from intercoder.ingest import project_from_dict

    return project_from_dict(project_dict(*args, **kwargs), validate=validate)


@st.composite
def project_data(draw, max_docs=3, max_len=30, max_quotes=6):
    """A random valid project with pre-defined, non-overlapping quotations."""
    domains = {"S1": ["a", "b"], "S2": ["c", "d"], "S3": ["e"]}
    n_docs = draw(st.integers(1, max_docs))
    documents = {f"d{i}": draw(st.integers(0, max_len)) for i in range(n_docs)}
    quotations = {}
    for doc, length in documents.items():
        if length < 1:
            continue
        cuts = sorted(draw(st.sets(st.integers(0, length), min_size=2, max_size=2 * max_quotes)))
        for n, (s, e) in enumerate(zip(cuts, cuts[1:])):
            if draw(st.booleans()):
                quotations[f"{doc}q{n}"] = (doc, s, e)
    applications = []
    for qid in quotations:
        for coder in ("A", "B"):
            # at most one code per domain keeps mutual exclusivity
            for domain, codes in domains.items():
                pick = draw(st.sampled_from([None] + codes))
                if pick is not None:
                    applications.append((coder, qid, pick))
    return domains, documents, quotations, applications
