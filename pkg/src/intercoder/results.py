from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

RELIABLE = 0.80
TENTATIVE = 0.667


class NAReason(str, enum.Enum):
    """Why a coefficient could not be computed."""

    INSUFFICIENT_ITEMS = "insufficient_paired_items"
    INSUFFICIENT_PAIRS = "insufficient_pairs"
    SINGLE_LABEL = "single_label"
    ZERO_EXPECTED = "zero_expected_disagreement"
    CHANCE_CERTAIN = "chance_agreement_is_one"
    NO_SELECTION = "empty_selections"

    @property
    def text(self) -> str:
        return self.value.replace("_", " ")


class Verdict(str, enum.Enum):
    RELIABLE = "reliable"
    TENTATIVE = "tentative"
    UNRELIABLE = "unreliable"
    NOT_AVAILABLE = "not_available"

    @property
    def label(self) -> str:
        return {
            "reliable": "reliable(≥0.80)",
            "tentative": "tentative(≥0.667)",
            "unreliable": "unreliable",
            "not_available": "N/A",
        }[self.value]


def verdict_for(value: Optional[float]) -> Verdict:
    if value is None:
        return Verdict.NOT_AVAILABLE
    if value >= RELIABLE:
        return Verdict.RELIABLE
    if value >= TENTATIVE:
        return Verdict.TENTATIVE
    return Verdict.UNRELIABLE


@dataclass
class AgreementResult:
    """One coefficient: a value, or a reason it is not available.

    ``details`` carries the intermediate artifacts (coincidence or
    contingency matrices, marginals, chance agreement) as plain numbers.
    """

    kind: str
    value: Optional[float] = None
    na_reason: Optional[NAReason] = None
    observed_disagreement: Optional[float] = None
    expected_disagreement: Optional[float] = None
    n_paired_items: Optional[int] = None
    domain: Optional[str] = None
    band: Optional[str] = None
    warnings: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if (self.value is None) == (self.na_reason is None):
            raise ValueError("exactly one of value and na_reason must be set")

    @property
    def available(self) -> bool:
        return self.value is not None

    @property
    def verdict(self) -> Verdict:
        return verdict_for(self.value)
