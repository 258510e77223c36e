"""Pseudo-metrics over labels, used to weight disagreements."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .model import ValidationReport, Violation

Value = Union[float, Sequence[float]]

KINDS = ("discrete", "interval", "angular", "custom")


class MetricConfigError(ValueError):
    """A metric cannot be evaluated on the given labels."""


def discrete_distance(i, j) -> int:
    return 0 if i == j else 1


def interval_distance(u: Value, v: Value) -> float:
    """Absolute difference of scalars, euclidean norm of the difference of vectors."""
    if np.ndim(u) == 0 and np.ndim(v) == 0:
        return abs(float(u) - float(v))
    return float(np.linalg.norm(np.asarray(u, dtype=float) - np.asarray(v, dtype=float)))


def angular_distance(a: float, b: float) -> float:
    """``sin^2`` of the angle difference in radians; zero for opposed angles."""
    # sin^2 has period pi; reducing first makes opposed angles exactly 0
    return math.sin(math.remainder(a - b, math.pi)) ** 2


@dataclass(frozen=True)
class LabelMetric:
    """A distance between labels.

    ``values`` maps label names to numbers (or vectors) for the interval and
    angular kinds. ``matrix`` holds a k-by-k table for the custom kind, with
    rows and columns in the order of the label list it is evaluated on.
    """

    kind: str = "discrete"
    values: Mapping[str, Value] = field(default_factory=dict)
    matrix: Optional[Sequence[Sequence[float]]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MetricConfigError(f"unknown metric kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "custom" and self.matrix is None:
            raise MetricConfigError("custom metric needs a matrix")

    @classmethod
    def angular_degrees(cls, values: Mapping[str, float]) -> "LabelMetric":
        return cls("angular", {k: math.radians(v) for k, v in values.items()})

    def _value(self, label: str):
        try:
            return self.values[label]
        except KeyError:
            raise MetricConfigError(f"{self.kind} metric has no value for label {label!r}") from None

    def distance_matrix(self, labels: Sequence[str]) -> np.ndarray:
        k = len(labels)
        if self.kind == "discrete":
            return np.ones((k, k), dtype=np.int64) - np.eye(k, dtype=np.int64)
        if self.kind == "custom":
            m = np.asarray(self.matrix, dtype=float)
            if m.shape != (k, k):
                raise MetricConfigError(f"custom matrix has shape {m.shape}, expected {(k, k)}")
            return m
        fn = interval_distance if self.kind == "interval" else angular_distance
        vals = [self._value(label) for label in labels]
        out = np.zeros((k, k), dtype=float)
        for i in range(k):
            for j in range(k):
                out[i, j] = fn(vals[i], vals[j])
        return out


DISCRETE = LabelMetric()


def validate_metric(metric: LabelMetric, labels: Sequence[str], tol: float = 1e-12) -> ValidationReport:
    """Check the pseudo-metric axioms on the given labels.

    The angular metric is exempt from the triangle inequality: ``sin^2``
    violates it for some angle triples but is an accepted choice anyway.
    """
    try:
        d = metric.distance_matrix(labels)
    except MetricConfigError as exc:
        return ValidationReport((Violation("metric-config", str(exc)),))
    violations = []
    k = len(labels)
    for i in range(k):
        if abs(d[i, i]) > tol:
            violations.append(Violation("nonzero-diagonal", f"d({labels[i]}, {labels[i]}) = {d[i, i]}"))
        for j in range(k):
            if d[i, j] < -tol:
                violations.append(Violation("negative", f"d({labels[i]}, {labels[j]}) = {d[i, j]}"))
            if j > i and abs(d[i, j] - d[j, i]) > tol:
                violations.append(
                    Violation(
                        "asymmetric",
                        f"d({labels[i]}, {labels[j]}) = {d[i, j]} but d({labels[j]}, {labels[i]}) = {d[j, i]}",
                    )
                )
    if metric.kind != "angular":
        for i, j, m in itertools.product(range(k), repeat=3):
            if d[i, m] > d[i, j] + d[j, m] + tol:
                violations.append(
                    Violation(
                        "triangle",
                        f"d({labels[i]}, {labels[m]}) = {d[i, m]} > "
                        f"d({labels[i]}, {labels[j]}) + d({labels[j]}, {labels[m]}) = {d[i, j] + d[j, m]}",
                    )
                )
    return ValidationReport(tuple(violations))
