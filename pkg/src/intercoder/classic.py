"""Percent agreement, Holsti, Scott's pi, Cohen's kappa and Fleiss' kappa.

These work on single-label nominal ratings. The two-coder coefficients drop
items that either coder left unrated and report how many were dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .model import LabelledJudgements
from .results import AgreementResult, NAReason


class UnsupportedError(ValueError):
    """The coefficient is not defined for this shape of data."""


@dataclass(frozen=True)
class NominalRatings:
    """Single-label ratings: ``ratings[(coder, item)]`` is a category index."""

    categories: tuple[str, ...]
    coders: tuple[str, ...]
    items: tuple[str, ...]
    ratings: Mapping[tuple[str, str], int]

    def __post_init__(self):
        k = len(self.categories)
        for key, cat in self.ratings.items():
            if not 0 <= cat < k:
                raise ValueError(f"rating {key} has category index {cat} outside 0..{k - 1}")

    @property
    def m(self) -> int:
        return len(self.items)

    @property
    def n(self) -> int:
        return len(self.coders)

    @property
    def k(self) -> int:
        return len(self.categories)

    def rating(self, coder: str, item: str) -> Optional[int]:
        return self.ratings.get((coder, item))

    @classmethod
    def from_table(
        cls,
        rows: Mapping[str, Sequence[Optional[str]]],
        items: Optional[Sequence[str]] = None,
        categories: Optional[Sequence[str]] = None,
    ) -> "NominalRatings":
        """Build from ``{coder: [token-or-None per item]}``."""
        width = len(next(iter(rows.values()))) if rows else 0
        items = tuple(items) if items is not None else tuple(str(i + 1) for i in range(width))
        if categories is None:
            seen: dict[str, None] = {}
            for tokens in rows.values():
                for tok in tokens:
                    if tok is not None:
                        seen.setdefault(tok, None)
            categories = tuple(seen)
        categories = tuple(categories)
        index = {c: i for i, c in enumerate(categories)}
        ratings = {}
        for coder, tokens in rows.items():
            for item, tok in zip(items, tokens):
                if tok is not None:
                    if tok not in index:
                        raise ValueError(f"category {tok!r} not in {categories}")
                    ratings[(coder, item)] = index[tok]
        return cls(categories, tuple(rows), items, ratings)

    def to_judgements(self) -> LabelledJudgements:
        return LabelledJudgements(
            self.categories,
            self.items,
            self.coders,
            {key: frozenset({cat}) for key, cat in self.ratings.items()},
        )


def _require_two(ratings: NominalRatings, name: str):
    if ratings.n != 2:
        raise UnsupportedError(f"{name} is defined for exactly two coders, got {ratings.n}")


def _complete_pairs(ratings: NominalRatings) -> tuple[list[tuple[int, int]], int]:
    first, second = ratings.coders
    pairs = []
    dropped = 0
    for item in ratings.items:
        a, b = ratings.rating(first, item), ratings.rating(second, item)
        if a is None or b is None:
            dropped += 1
        else:
            pairs.append((a, b))
    return pairs, dropped


def percent_agreement(ratings: NominalRatings) -> AgreementResult:
    _require_two(ratings, "percent agreement")
    pairs, dropped = _complete_pairs(ratings)
    details = {"items": len(pairs), "dropped_items": dropped}
    if not pairs:
        return AgreementResult("percent", na_reason=NAReason.INSUFFICIENT_ITEMS, details=details)
    agreed = sum(1 for a, b in pairs if a == b)
    details["agreed"] = agreed
    return AgreementResult("percent", value=agreed / len(pairs), n_paired_items=len(pairs), details=details)


Span = tuple  # (document_id, start, end) or (start, end)


def _merged(spans: Iterable[Span]) -> dict:
    by_doc: dict = {}
    for span in spans:
        doc, start, end = span if len(span) == 3 else (None, *span)
        if end < start:
            raise ValueError(f"span {span} has end before start")
        by_doc.setdefault(doc, []).append((start, end))
    out = {}
    for doc, intervals in by_doc.items():
        intervals.sort()
        merged = []
        for start, end in intervals:
            if merged and start <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], end)
            else:
                merged.append([start, end])
        out[doc] = merged
    return out


def _measure(merged: dict) -> int:
    return sum(end - start for intervals in merged.values() for start, end in intervals)


def _intersection(a: dict, b: dict) -> int:
    total = 0
    for doc in a.keys() & b.keys():
        xs, ys = a[doc], b[doc]
        i = j = 0
        while i < len(xs) and j < len(ys):
            lo = max(xs[i][0], ys[j][0])
            hi = min(xs[i][1], ys[j][1])
            if hi > lo:
                total += hi - lo
            if xs[i][1] < ys[j][1]:
                i += 1
            else:
                j += 1
    return total


def holsti_index(first: Iterable[Span], second: Iterable[Span]) -> AgreementResult:
    """``2 * overlap / (selected_1 + selected_2)`` over two coders' span selections.

    Spans are ``(start, end)`` or ``(document_id, start, end)``, half-open.
    Overlapping spans within one selection are merged first.
    """
    a, b = _merged(first), _merged(second)
    size_a, size_b = _measure(a), _measure(b)
    overlap = _intersection(a, b)
    details = {"selected": [size_a, size_b], "overlap": overlap}
    if size_a + size_b == 0:
        return AgreementResult("holsti", na_reason=NAReason.NO_SELECTION, details=details)
    return AgreementResult("holsti", value=2 * overlap / (size_a + size_b), details=details)


def _chance_corrected(kind, p_o: Fraction, p_e: Fraction, details, n_items, band=False) -> AgreementResult:
    details.update(p_o=float(p_o), p_e=float(p_e))
    if p_e == 1:
        return AgreementResult(kind, na_reason=NAReason.CHANCE_CERTAIN, n_paired_items=n_items, details=details)
    value = float((p_o - p_e) / (1 - p_e))
    return AgreementResult(
        kind,
        value=value,
        n_paired_items=n_items,
        band=interpret_kappa(value) if band else None,
        details=details,
    )


def scott_pi(ratings: NominalRatings) -> AgreementResult:
    """Chance agreement from category proportions pooled over both coders' judgements."""
    _require_two(ratings, "Scott's pi")
    pairs, dropped = _complete_pairs(ratings)
    details = {"dropped_items": dropped}
    if not pairs:
        return AgreementResult("scott_pi", na_reason=NAReason.INSUFFICIENT_ITEMS, details=details)
    m = len(pairs)
    pooled = [0] * ratings.k
    for a, b in pairs:
        pooled[a] += 1
        pooled[b] += 1
    p = [Fraction(c, 2 * m) for c in pooled]
    p_o = Fraction(sum(1 for a, b in pairs if a == b), m)
    details["proportions"] = [float(x) for x in p]
    return _chance_corrected("scott_pi", p_o, sum(x * x for x in p), details, m)


def contingency_matrix(ratings: NominalRatings) -> np.ndarray:
    """k-by-k counts laid out as the customary table: rows follow the second
    coder's category, columns the first coder's.

    Entry ``[j, i]`` counts items the first coder put in category ``i`` and the
    second coder in ``j``.
    """
    _require_two(ratings, "the contingency matrix")
    pairs, _ = _complete_pairs(ratings)
    table = np.zeros((ratings.k, ratings.k), dtype=np.int64)
    for a, b in pairs:
        table[b, a] += 1
    return table


def cohen_kappa(ratings: NominalRatings) -> AgreementResult:
    _require_two(ratings, "Cohen's kappa")
    table = contingency_matrix(ratings)
    m = int(table.sum())
    details = {"contingency": table.tolist(), "dropped_items": ratings.m - m}
    if m == 0:
        return AgreementResult("cohen_kappa", na_reason=NAReason.INSUFFICIENT_ITEMS, details=details)
    p_o = Fraction(int(np.trace(table)), m)
    first = table.sum(axis=0)
    second = table.sum(axis=1)
    p_c = sum(Fraction(int(first[i]) * int(second[i]), m * m) for i in range(ratings.k))
    return _chance_corrected("cohen_kappa", p_o, p_c, details, m, band=True)


def category_item_counts(ratings: NominalRatings) -> np.ndarray:
    """k-by-m matrix: how many coders put item ``b`` in category ``i``."""
    counts = np.zeros((ratings.k, ratings.m), dtype=np.int64)
    for b, item in enumerate(ratings.items):
        for coder in ratings.coders:
            cat = ratings.rating(coder, item)
            if cat is not None:
                counts[cat, b] += 1
    return counts


def fleiss_kappa(counts) -> AgreementResult:
    """Fleiss' kappa from a k-by-m count matrix (or from :class:`NominalRatings`).

    Every item must be rated by the same number ``n >= 2`` of raters.
    """
    if isinstance(counts, NominalRatings):
        counts = category_item_counts(counts)
    counts = np.asarray(counts, dtype=np.int64)
    per_item = counts.sum(axis=0)
    if counts.shape[1] == 0:
        return AgreementResult("fleiss_kappa", na_reason=NAReason.INSUFFICIENT_ITEMS)
    if len(set(per_item.tolist())) != 1:
        raise UnsupportedError("Fleiss' kappa needs the same number of raters for every item")
    n = int(per_item[0])
    if n < 2:
        raise UnsupportedError(f"Fleiss' kappa needs at least two raters per item, got {n}")
    m = counts.shape[1]
    p = [Fraction(int(counts[i].sum()), n * m) for i in range(counts.shape[0])]
    per_item_agreement = [
        Fraction(int((counts[:, b] ** 2).sum()) - n, n * (n - 1)) for b in range(m)
    ]
    p_o = sum(per_item_agreement) / m
    details = {
        "raters": n,
        "proportions": [float(x) for x in p],
        "item_agreement": [float(x) for x in per_item_agreement],
    }
    return _chance_corrected("fleiss_kappa", p_o, sum(x * x for x in p), details, m)


LANDIS_KOCH = (
    (0.20, "Slight"),
    (0.40, "Fair"),
    (0.60, "Moderate"),
    (0.80, "Substantial"),
    (1.00, "Almost perfect"),
)


def interpret_kappa(value: float) -> str:
    """Landis-Koch strength of agreement.

    Band upper bounds are inclusive; values falling between bands, such
    as 0.205, go to the higher band.
    """
    if value < 0:
        return "Poor"
    for upper, band in LANDIS_KOCH:
        if value <= upper:
            return band
    return "Almost perfect"
