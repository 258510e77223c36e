"""Universal Krippendorff's alpha over labelled judgements.

Every item contributes its weight to each ordered pair of labels given by
two distinct coders. Integer (or Fraction) weights are accumulated exactly;
the coefficient itself is formed from exact rationals and rounded once.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

from .metrics import DISCRETE, LabelMetric
from .model import LabelledJudgements
from .results import AgreementResult, NAReason


class InsufficientData(ValueError):
    def __init__(self, reason: NAReason, message: str = ""):
        super().__init__(message or reason.text)
        self.reason = reason


def _is_exact(w) -> bool:
    return isinstance(w, (Integral, Rational)) and not isinstance(w, bool)


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Integral):
        return Fraction(int(x))
    return Fraction(float(x))


def _plain(x):
    """Convert a matrix entry to a JSON-friendly python number."""
    if isinstance(x, Integral):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    return float(x)


def paired_items(judgements: LabelledJudgements) -> list[str]:
    """Items that received non-empty judgements from at least two coders."""
    out = []
    for item in judgements.items:
        voters = sum(1 for c in judgements.coders if judgements.judgement(c, item))
        if voters >= 2:
            out.append(item)
    return out


def observed_coincidences(judgements: LabelledJudgements) -> np.ndarray:
    """k-by-k matrix of weighted ordered label pairs from distinct coders.

    For each item, label pair ``(a, b)`` gets ``count[a] * count[b]`` minus the
    pairs a single coder would form with itself, times the item weight.
    Items are visited in their stored order so float sums are reproducible.
    """
    k = judgements.k
    exact = all(_is_exact(judgements.weight(i)) for i in judgements.items)
    o = [[0] * k for _ in range(k)] if exact else [[0.0] * k for _ in range(k)]
    for item in judgements.items:
        sets = [s for s in (judgements.judgement(c, item) for c in judgements.coders) if s]
        if len(sets) < 2:
            continue
        w = judgements.weight(item)
        if not exact:
            w = float(w)
        count = Counter()
        same = Counter()
        for s in sets:
            count.update(s)
            for a in s:
                for b in s:
                    same[a, b] += 1
        for a in sorted(count):
            for b in sorted(count):
                pairs = count[a] * count[b] - same[a, b]
                if pairs:
                    o[a][b] += w * pairs
    return np.array(o, dtype=object if exact else float).reshape(k, k)


def marginals(matrix: np.ndarray) -> tuple[np.ndarray, object]:
    t_i = matrix.sum(axis=1)
    return t_i, t_i.sum()


def _expected_numerator(t_i: np.ndarray) -> np.ndarray:
    """``t_i t_j`` off the diagonal and ``t_i (t_i - 1)`` on it."""
    num = np.outer(t_i, t_i)
    for i in range(len(t_i)):
        num[i, i] -= t_i[i]
    return num


def expected_coincidences(t_i, t=None) -> np.ndarray:
    t_i = np.asarray(t_i, dtype=object if all(_is_exact(x) for x in t_i) else float)
    if t is None:
        t = t_i.sum()
    if t < 2:
        raise InsufficientData(NAReason.INSUFFICIENT_PAIRS, f"total of {t} pairable values, need at least 2")
    num = _expected_numerator(t_i)
    return np.array([[float(_exact(x) / _exact(t - 1)) for x in row] for row in num], dtype=float).reshape(
        num.shape
    )


def disagreement(matrix: np.ndarray, delta: np.ndarray):
    """Sum of matrix entries weighted by label distances."""
    matrix = np.asarray(matrix)
    delta = np.asarray(delta)
    total = 0
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            if delta[i, j]:
                total += matrix[i, j] * delta[i, j]
    return total


def universal_alpha(
    judgements: LabelledJudgements,
    metric: LabelMetric = DISCRETE,
    kind: str = "alpha",
    domain: str | None = None,
) -> AgreementResult:
    """Compute ``1 - D_o / D_e`` or report why it is not available.

    Not available when fewer than two items carry paired judgements, or when
    the expected disagreement vanishes (a single label in use, or labels the
    metric does not separate).
    """
    paired = paired_items(judgements)
    delta = metric.distance_matrix(judgements.labels)
    o = observed_coincidences(judgements)
    t_i, t = marginals(o)
    details = {
        "labels": list(judgements.labels),
        "observed": [[_plain(x) for x in row] for row in o],
        "marginals": [_plain(x) for x in t_i],
        "total": _plain(t),
    }

    def na(reason: NAReason, d_o=None, d_e=None) -> AgreementResult:
        return AgreementResult(
            kind,
            na_reason=reason,
            observed_disagreement=d_o,
            expected_disagreement=d_e,
            n_paired_items=len(paired),
            domain=domain,
            details=details,
        )

    if len(paired) < 2:
        return na(NAReason.INSUFFICIENT_ITEMS)
    if t < 2:
        return na(NAReason.INSUFFICIENT_PAIRS)

    e_num = _expected_numerator(t_i)
    e = expected_coincidences(t_i, t)
    details["expected"] = e.tolist()
    d_o = disagreement(o, delta)
    d_e_num = disagreement(e_num, delta)
    d_o_f = float(d_o)
    d_e_f = float(_exact(d_e_num) / _exact(t - 1))
    if d_e_num == 0:
        used = sum(1 for x in t_i if x > 0)
        return na(NAReason.SINGLE_LABEL if used <= 1 else NAReason.ZERO_EXPECTED, d_o_f, 0.0)

    value = float(1 - _exact(d_o) * _exact(t - 1) / _exact(d_e_num))
    if metric.kind == "discrete":
        p_o = _exact(np.trace(o)) / _exact(t)
        p_e = _exact(np.trace(e_num)) / (_exact(t - 1) * _exact(t))
        details["p_o"] = float(p_o)
        details["p_e"] = float(p_e)
        details["alpha_from_agreement"] = float((p_o - p_e) / (1 - p_e))
    return AgreementResult(
        kind,
        value=value,
        observed_disagreement=d_o_f,
        expected_disagreement=d_e_f,
        n_paired_items=len(paired),
        domain=domain,
        details=details,
    )
