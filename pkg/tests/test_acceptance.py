"""Acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed even
without ``-s``.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import judgement_data, make_project, to_judgements
from oracles import alpha_from_definition, brute_force_coincidences
from test_classic import nominal
from intercoder import (
    LabelMetric,
    LabelledJudgements,
    NAReason,
    VariantSpec,
    cohen_kappa,
    compute_variant,
    contingency_matrix,
    fleiss_kappa,
    percent_agreement,
    scott_pi,
)
from intercoder.alpha import expected_coincidences, marginals, observed_coincidences, universal_alpha

CASES = 200
PROPERTY = settings(max_examples=CASES, deadline=None, database=None)


@pytest.fixture
def verdict(capsys):
    def emit(label, checks):
        """``checks`` is a list of (description, ok) pairs."""
        failed = [d for d, ok in checks if not ok]
        line = f"{'PASS' if not failed else 'FAIL'} {label}"
        if failed:
            line += " | failed: " + "; ".join(failed)
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line

    return emit


def near(x, target, tol):
    return x is not None and abs(x - target) <= tol


def test_criterion_1_slr15_coefficients(slr15, verdict):
    p = percent_agreement(slr15).value
    pi = scott_pi(slr15).value
    kappa = cohen_kappa(slr15)
    fk = fleiss_kappa(slr15).value
    a = universal_alpha(slr15.to_judgements()).value
    verdict(
        f"criterion 1 SLR-15: percent={p:.4f} pi={pi:.4f} kappa={kappa.value:.4f} ({kappa.band}) fleiss={fk:.4f} alpha={a:.4f}",
        [
            ("percent 0.667", near(p, 0.667, 0.001)),
            ("pi 0.322", near(pi, 0.322, 0.001)),
            ("kappa 0.391", near(kappa.value, 0.391, 0.001)),
            ("band Fair", kappa.band == "Fair"),
            ("fleiss 0.322", near(fk, 0.322, 0.001)),
            ("alpha 0.343", near(a, 0.343, 0.001)),
        ],
    )


def test_criterion_2_slr15_intermediates(slr15, verdict):
    c = contingency_matrix(slr15).tolist()
    o = observed_coincidences(slr15.to_judgements())
    t_i, t = marginals(o)
    e = expected_coincidences(t_i, t)
    scott_pe = scott_pi(slr15).details["p_e"]
    fleiss_pe = fleiss_kappa(slr15).details["p_e"]
    verdict(
        f"criterion 2 SLR-15 intermediates: contingency={c} o={o.tolist()} "
        f"e=({e[0, 0]:.3f}, {e[0, 1]:.3f}, {e[1, 1]:.3f}) P_e scott={scott_pe:.4f} fleiss={fleiss_pe:.4f}",
        [
            ("contingency [[4,5],[0,6]]", c == [[4, 5], [0, 6]]),
            ("observed [[8,5],[5,12]]", o.tolist() == [[8, 5], [5, 12]]),
            ("e11 5.38", near(e[0, 0], 5.38, 0.005)),
            ("e12 7.62", near(e[0, 1], 7.62, 0.005)),
            ("e22 9.38", near(e[1, 1], 9.38, 0.005)),
            ("scott P_e 0.509", near(scott_pe, 0.509, 0.001)),
            ("fleiss P_e 0.508", near(fleiss_pe, 0.508, 0.001)),
        ],
    )


def test_criterion_3a_p07_reconstruction(p07, verdict):
    binary = compute_variant(p07, VariantSpec("domain_binary", "P07"))
    cu = compute_variant(p07, VariantSpec("cu", "P07"))
    whole = compute_variant(p07, VariantSpec("global_binary"))
    total = sum(d.length for d in p07.documents)
    o = binary.details["observed"]
    e12 = binary.details["expected"][0][1]
    verdict(
        f"criterion 3a P07: units={total} alpha_binary={binary.value:.4f} o={o} e12={e12:.2f} "
        f"cu={cu.value} alpha_binary^gl(all domains)={whole.value}",
        [
            ("504384 units", total == 504384),
            ("alpha_binary 0.913", near(binary.value, 0.913, 0.001)),
            ("observed (3254,307,307,1004900)", o == [[3254, 307], [307, 1004900]]),
            ("e12 3548.43", near(e12, 3548.43, 0.01)),
            ("cu-alpha exactly 1", cu.value == 1.0),
            ("global over all domains 1.0", whole.value == 1.0),
        ],
    )


def test_criterion_3b_p07_global_subset(p07, verdict):
    # Selecting only P07 makes the global relabelling identical to the
    # per-domain one, so the value is 0.913 rather than the reference 0.931.
    # Kept red on purpose rather than tuned to the reference value.
    only = compute_variant(p07, VariantSpec("global_binary", domains=("P07",)))
    verdict(
        f"criterion 3b P07: alpha_binary^gl(P07 only)={only.value:.4f} warnings={only.warnings}",
        [
            ("global over P07 only 0.931", near(only.value, 0.931, 0.001)),
            ("subset warning", bool(only.warnings)),
        ],
    )


def test_criterion_4_single_quotation_domain(p07, verdict):
    tiny = make_project(
        {"S1": ["a", "b"], "S2": ["c"]},
        {"d": 40},
        {"q1": ("d", 0, 10), "q2": ("d", 10, 20)},
        [("A", "q1", "a"), ("B", "q1", "a"), ("A", "q2", "c"), ("B", "q2", "c")],
    )
    r = compute_variant(tiny, VariantSpec("cu", "S1"))
    fixture = compute_variant(p07, VariantSpec("cu", "P04"))
    text = r.na_reason.text if r.na_reason else None
    verdict(
        f"criterion 4 degeneracy: cu-alpha -> {text!r}, fixture P04 -> "
        f"{fixture.na_reason.text if fixture.na_reason else fixture.value!r}",
        [
            ("not available", not r.available and r.value is None),
            ("reason insufficient paired items", text == "insufficient paired items"),
            ("fixture P04 not available", fixture.na_reason is NAReason.INSUFFICIENT_ITEMS),
        ],
    )


# criterion 5: property suites, each run for CASES randomized examples


@PROPERTY
@given(judgement_data())
def prop_symmetry_and_marginals(raw):
    o = observed_coincidences(to_judgements(raw))
    assert (o == o.T).all()
    t_i, t = marginals(o)
    if t >= 2:
        e = expected_coincidences(t_i, t)
        assert np.allclose(e, e.T) and np.allclose(e.sum(axis=1), np.asarray(t_i, dtype=float))


@PROPERTY
@given(judgement_data())
def prop_permutation_invariance(raw):
    labels, coders, items, data, weights = raw
    base = universal_alpha(to_judgements(raw))
    rev = {c: f"r{n}" for n, c in enumerate(reversed(coders))}
    permuted = LabelledJudgements(
        labels,
        tuple(reversed(items)),
        tuple(rev[c] for c in reversed(coders)),
        {(rev[c], i): s for (c, i), s in data.items()},
        weights,
    )
    other = universal_alpha(permuted)
    assert other.details["observed"] == base.details["observed"] and other.value == base.value


@PROPERTY
@given(judgement_data(), judgement_data())
def prop_batch_additivity(first, second):
    labels = max(first[0], second[0], key=len)
    a = LabelledJudgements(labels, first[2], first[1], first[3], first[4])
    b = LabelledJudgements(
        labels,
        tuple("b" + i for i in second[2]),
        second[1],
        {(c, "b" + i): s for (c, i), s in second[3].items()},
        {"b" + i: w for i, w in second[4].items()},
    )
    union = LabelledJudgements(
        labels, a.items + b.items, tuple(dict.fromkeys(a.coders + b.coders)), {**a.judgements, **b.judgements}, {**a.weights, **b.weights}
    )
    assert (observed_coincidences(union) == observed_coincidences(a) + observed_coincidences(b)).all()


@PROPERTY
@given(judgement_data(max_weight=4))
def prop_weight_replication(raw):
    labels, coders, items, data, weights = raw
    copies, copy_items = {}, []
    for item in items:
        for r in range(weights[item]):
            copy_items.append(f"{item}/{r}")
            for c in coders:
                copies[(c, f"{item}/{r}")] = data[(c, item)]
    a = universal_alpha(to_judgements(raw))
    b = universal_alpha(LabelledJudgements(labels, tuple(copy_items), coders, copies))
    assert a.details["observed"] == b.details["observed"]
    if a.available:
        assert a.value == b.value


@PROPERTY
@given(judgement_data(max_coders=4, max_items=6, max_labels=3))
def prop_brute_force_oracle(raw):
    labels, coders, items, data, weights = raw
    assert observed_coincidences(to_judgements(raw)).tolist() == brute_force_coincidences(labels, coders, items, data, weights)


@PROPERTY
@given(nominal())
def prop_fleiss_equals_scott(ratings):
    f, s = fleiss_kappa(ratings), scott_pi(ratings)
    assert f.na_reason == s.na_reason
    if s.available:
        assert abs(f.value - s.value) < 1e-12


@PROPERTY
@given(nominal())
def prop_coincidence_is_symmetrised_contingency(ratings):
    c = contingency_matrix(ratings)
    assert np.array_equal(observed_coincidences(ratings.to_judgements()), c + c.T)


@PROPERTY
@given(judgement_data())
def prop_alpha_one_iff_no_disagreement(raw):
    r = universal_alpha(to_judgements(raw))
    if r.available:
        assert (r.value == 1) == (r.observed_disagreement == 0)


@PROPERTY
@given(judgement_data())
def prop_alpha_at_most_one(raw):
    metric = LabelMetric("interval", {label: float(n * n) for n, label in enumerate(raw[0])})
    for m in (LabelMetric(), metric):
        r = universal_alpha(to_judgements(raw), m)
        if r.available:
            assert r.value <= 1 + 1e-12


PROPERTIES = [
    ("symmetry and marginal consistency", prop_symmetry_and_marginals),
    ("coder/item permutation invariance", prop_permutation_invariance),
    ("batch additivity", prop_batch_additivity),
    ("weight replication", prop_weight_replication),
    ("brute-force ordered-pair oracle", prop_brute_force_oracle),
    ("Fleiss = Scott for n = 2", prop_fleiss_equals_scott),
    ("o = c + c^T", prop_coincidence_is_symmetrised_contingency),
    ("alpha = 1 iff D_o = 0", prop_alpha_one_iff_no_disagreement),
    ("alpha <= 1 for non-negative metrics", prop_alpha_at_most_one),
]


def test_criterion_5_property_suites(verdict):
    checks = []
    for name, prop in PROPERTIES:
        try:
            prop()
            checks.append((name, True))
        except Exception as exc:  # report every suite, not only the first failure
            checks.append((f"{name}: {type(exc).__name__}", False))
    verdict(f"criterion 5 property suites: {len(PROPERTIES)} suites x {CASES} cases", checks)


def test_criterion_6_total_opposition(verdict):
    data = {}
    for n in range(10):
        data[("J1", f"#{n}")] = ["A"]
        data[("J2", f"#{n}")] = ["B"]
    r = universal_alpha(LabelledJudgements.from_labels(data))
    o = r.details["observed"]
    exact, _, _ = alpha_from_definition(o, [[0, 1], [1, 0]])
    verdict(
        f"criterion 6 total opposition: alpha={r.value!r} exact={exact}",
        [("exact rational -9/10", exact == Fraction(-9, 10)), ("alpha == -0.9", r.value == -0.9)],
    )


def test_criterion_7_single_voted_quotation(p07, verdict):
    # the 307-unit quotation in ID17 carries a P07 code from one coder only
    q = next(q for q in p07.quotations if q.document_id == "ID17" and q.length == 307)
    trimmed = type(p07)(
        p07.codebook,
        p07.documents,
        p07.coders,
        tuple(x for x in p07.quotations if x.id != q.id),
        tuple(a for a in p07.applications if a.quotation_id != q.id),
        p07.metric,
        p07.unit,
    )
    cu_with = compute_variant(p07, VariantSpec("cu", "P07"))
    cu_without = compute_variant(trimmed, VariantSpec("cu", "P07"))
    bin_with = compute_variant(p07, VariantSpec("domain_binary", "P07"))
    bin_without = compute_variant(trimmed, VariantSpec("domain_binary", "P07"))
    verdict(
        f"criterion 7 single-voted quotation: cu-alpha {cu_with.value} -> {cu_without.value}; "
        f"alpha_binary with it {bin_with.value:.4f}, without it {bin_without.value:.4f}",
        [
            ("cu-alpha unchanged", cu_with.value == cu_without.value),
            ("cu observed unchanged", cu_with.details["observed"] == cu_without.details["observed"]),
            ("alpha_binary with the quotation does not exceed alpha_binary without it", bin_with.value <= bin_without.value),
        ],
    )


def test_criterion_8_excluded_results(verdict):
    # Round-2 alpha_binary, the per-domain cu-alpha table and the two Cu-alpha
    # values need the full interview corpus, which is not available. What can
    # be checked is the mechanism behind a small negative alpha_binary: two
    # coders whose sparse votes never meet.
    data = {}
    for n in range(200):
        data[("A", f"u{n}")] = ["1" if n in (3, 50) else "0"]
        data[("B", f"u{n}")] = ["1" if n in (120,) else "0"]
    r = universal_alpha(LabelledJudgements.from_labels(data, labels=["1", "0"]))
    verdict(
        "criterion 8 excluded (needs the full interview corpus): round-2 alpha_binary^P07, per-domain cu-alpha table, "
        f"Cu-alpha 0.67/0.905; mechanism check: disjoint sparse votes give alpha_binary={r.value:.4f}",
        [("disjoint sparse votes give a small negative alpha", -0.05 < r.value < 0)],
    )
