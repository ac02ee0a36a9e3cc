"""Classification metrics: confusion matrices, accuracy, per-class and macro
precision/recall/F1, cross-entropy loss, test-size sweeps, and error listings."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    EmptyMatrixError,
    InvalidProbabilityError,
    InvalidSizesError,
    LengthMismatchError,
    UnknownLabelError,
)

PROB_FLOOR = 1e-12

# Macro F1 has two circulating definitions; both are available. The default
# (mean of per-class F1) is what reproduces the reference result tables.
MACRO_F1_MEAN = "mean_of_class_f1"
MACRO_F1_HARMONIC = "harmonic_of_macro_pr"


@dataclass
class ConfusionMatrix:
    class_names: tuple[str, ...]
    counts: np.ndarray  # rows = actual, columns = predicted

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def row(self, name: str) -> tuple[int, ...]:
        return tuple(int(v) for v in self.counts[self.class_names.index(name)])


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    degenerate: bool = False  # True when a 0/0 case was defined as 0


@dataclass
class MetricsReport:
    n: int
    accuracy: float
    per_class: dict[str, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    macro_f1_variant: str = MACRO_F1_MEAN
    loss: float | None = None


def _label_index(label, class_names: tuple[str, ...]) -> int:
    if isinstance(label, str):
        try:
            return class_names.index(label)
        except ValueError:
            raise UnknownLabelError(f"label {label!r} not in {class_names}") from None
    index = int(label)
    if not 0 <= index < len(class_names):
        raise UnknownLabelError(f"label index {index} out of range for {class_names}")
    return index


def confusion_matrix(actual: Sequence, predicted: Sequence, class_names: Sequence[str]) -> ConfusionMatrix:
    """counts[i][j] = number of records with actual class i predicted as j."""
    if len(actual) != len(predicted):
        raise LengthMismatchError(f"{len(actual)} actual vs {len(predicted)} predicted")
    names = tuple(class_names)
    counts = np.zeros((len(names), len(names)), dtype=np.int64)
    for a, p in zip(actual, predicted):
        counts[_label_index(a, names), _label_index(p, names)] += 1
    return ConfusionMatrix(names, counts)


def matrix_from_rows(rows: Sequence[Sequence[int]], class_names: Sequence[str]) -> ConfusionMatrix:
    counts = np.asarray(rows, dtype=np.int64)
    if counts.ndim != 2 or counts.shape[0] != counts.shape[1] or counts.shape[0] != len(class_names):
        raise LengthMismatchError(f"expected a square matrix over {len(class_names)} classes")
    return ConfusionMatrix(tuple(class_names), counts)


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise EmptyMatrixError("confusion matrix has no records")
    return float(np.trace(cm.counts)) / cm.total


def per_class_metrics(cm: ConfusionMatrix) -> dict[str, ClassMetrics]:
    """Precision per column, recall per row, F1 as their harmonic mean; 0/0 -> 0."""
    if cm.total == 0:
        raise EmptyMatrixError("confusion matrix has no records")
    out: dict[str, ClassMetrics] = {}
    col_sums = cm.counts.sum(axis=0)
    row_sums = cm.counts.sum(axis=1)
    for i, name in enumerate(cm.class_names):
        tp = int(cm.counts[i, i])
        degenerate = False
        if col_sums[i] == 0:
            precision, degenerate = 0.0, True
        else:
            precision = tp / int(col_sums[i])
        if row_sums[i] == 0:
            recall, degenerate = 0.0, True
        else:
            recall = tp / int(row_sums[i])
        f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
        out[name] = ClassMetrics(precision, recall, f1, degenerate)
    return out


def macro_f1(cm: ConfusionMatrix, variant: str = MACRO_F1_MEAN) -> float:
    per_class = per_class_metrics(cm)
    if variant == MACRO_F1_MEAN:
        return sum(m.f1 for m in per_class.values()) / len(per_class)
    if variant == MACRO_F1_HARMONIC:
        macro_p = sum(m.precision for m in per_class.values()) / len(per_class)
        macro_r = sum(m.recall for m in per_class.values()) / len(per_class)
        if macro_p + macro_r == 0:
            return 0.0
        return 2 * macro_p * macro_r / (macro_p + macro_r)
    raise ValueError(f"unknown macro F1 variant: {variant!r}")


def cross_entropy_loss(probs: Sequence[Sequence[float]], actual: Sequence[int]) -> float:
    """Mean of -ln p(true class), probabilities clamped to >= 1e-12."""
    if len(probs) != len(actual):
        raise LengthMismatchError(f"{len(probs)} probability vectors vs {len(actual)} labels")
    if len(probs) == 0:
        raise EmptyMatrixError("no records to evaluate")
    total = 0.0
    for i, (vector, label) in enumerate(zip(probs, actual)):
        v = np.asarray(vector, dtype=float)
        if v.ndim != 1 or (v < 0).any() or abs(float(v.sum()) - 1.0) > 1e-6:
            raise InvalidProbabilityError(f"record {i}: invalid probability vector {vector!r}")
        index = int(label)
        if not 0 <= index < len(v):
            raise UnknownLabelError(f"record {i}: class index {index} out of range")
        total += -float(np.log(max(float(v[index]), PROB_FLOOR)))
    return total / len(probs)


def compute_report(
    actual: Sequence,
    predicted: Sequence,
    class_names: Sequence[str],
    probs: Sequence[Sequence[float]] | None = None,
    macro_variant: str = MACRO_F1_MEAN,
) -> MetricsReport:
    cm = confusion_matrix(actual, predicted, class_names)
    return report_from_matrix(cm, probs=probs, actual=actual, macro_variant=macro_variant)


def report_from_matrix(
    cm: ConfusionMatrix,
    probs: Sequence[Sequence[float]] | None = None,
    actual: Sequence | None = None,
    macro_variant: str = MACRO_F1_MEAN,
) -> MetricsReport:
    per_class = per_class_metrics(cm)
    macro_p = sum(m.precision for m in per_class.values()) / len(per_class)
    macro_r = sum(m.recall for m in per_class.values()) / len(per_class)
    loss = None
    if probs is not None:
        if actual is None:
            raise LengthMismatchError("loss computation needs the actual labels")
        indices = [_label_index(a, cm.class_names) for a in actual]
        loss = cross_entropy_loss(probs, indices)
    return MetricsReport(
        n=cm.total,
        accuracy=accuracy(cm),
        per_class=per_class,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f1(cm, macro_variant),
        macro_f1_variant=macro_variant,
        loss=loss,
    )


def evaluate_by_test_size(
    actual: Sequence,
    predicted: Sequence,
    class_names: Sequence[str],
    sizes: Sequence[int],
    probs: Sequence[Sequence[float]] | None = None,
    seed: int = 42,
) -> list[tuple[int, MetricsReport]]:
    """Metrics over nested prefixes of the seed-shuffled evaluation stream."""
    total = len(actual)
    if len(predicted) != total:
        raise LengthMismatchError(f"{total} actual vs {len(predicted)} predicted")
    if not sizes or list(sizes) != sorted(sizes) or sizes[-1] > total or sizes[0] < 1:
        raise InvalidSizesError(f"sizes must be ascending, within [1, {total}]: {sizes}")
    order = list(range(total))
    random.Random(seed).shuffle(order)
    results = []
    for size in sizes:
        idx = order[:size]
        results.append(
            (
                size,
                compute_report(
                    [actual[i] for i in idx],
                    [predicted[i] for i in idx],
                    class_names,
                    probs=[probs[i] for i in idx] if probs is not None else None,
                ),
            )
        )
    return results


def list_misclassified(
    records: Sequence,
    actual: Sequence,
    predicted: Sequence,
    actual_class,
    predicted_class,
) -> list:
    """Records whose (actual, predicted) pair matches the filter, in input order."""
    if not (len(records) == len(actual) == len(predicted)):
        raise LengthMismatchError("records, actual, and predicted must align")
    return [
        record
        for record, a, p in zip(records, actual, predicted)
        if a == actual_class and p == predicted_class
    ]


# -- report emission ----------------------------------------------------------

def report_csv(report: MetricsReport) -> str:
    lines = ["metric,value"]
    lines.append(f"n,{report.n}")
    if report.loss is not None:
        lines.append(f"loss,{report.loss:.6f}")
    lines.append(f"accuracy,{report.accuracy:.6f}")
    for name, m in report.per_class.items():
        lines.append(f"precision_{name},{m.precision:.6f}")
        lines.append(f"recall_{name},{m.recall:.6f}")
        lines.append(f"f1_{name},{m.f1:.6f}")
    lines.append(f"macro_precision,{report.macro_precision:.6f}")
    lines.append(f"macro_recall,{report.macro_recall:.6f}")
    lines.append(f"macro_f1,{report.macro_f1:.6f}")
    lines.append(f"macro_f1_variant,{report.macro_f1_variant}")
    return "\n".join(lines) + "\n"


def report_table(report: MetricsReport) -> str:
    """Aligned text table in the Loss / Accuracy / F1 layout of the result tables."""
    loss = f"{report.loss:.2f}" if report.loss is not None else "-"
    head = f"{'n':>6}  {'Loss':>6}  {'Accuracy':>8}  {'F1 Score':>8}"
    body = f"{report.n:>6}  {loss:>6}  {report.accuracy:>8.2f}  {report.macro_f1:>8.2f}"
    per = [f"  {name:<10} precision={m.precision:.4f} recall={m.recall:.4f} f1={m.f1:.4f}"
           + ("  (0/0 defined as 0)" if m.degenerate else "")
           for name, m in report.per_class.items()]
    note = f"macro F1 variant: {report.macro_f1_variant}"
    return "\n".join([head, body, "", *per, "", note]) + "\n"


def confusion_csv(cm: ConfusionMatrix) -> str:
    lines = ["actual\\predicted," + ",".join(cm.class_names)]
    for i, name in enumerate(cm.class_names):
        lines.append(name + "," + ",".join(str(int(v)) for v in cm.counts[i]))
    return "\n".join(lines) + "\n"


def sweep_csv(results: Sequence[tuple[int, MetricsReport]]) -> str:
    lines = ["test_size,loss,accuracy,macro_f1"]
    for size, report in results:
        loss = f"{report.loss:.6f}" if report.loss is not None else ""
        lines.append(f"{size},{loss},{report.accuracy:.6f},{report.macro_f1:.6f}")
    return "\n".join(lines) + "\n"


def predictions_from_jsonl(text: str | bytes) -> list[dict]:
    """Parse the predictions interchange: {"id", "actual", "predicted", "probs"?}."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = []
    for line in text.splitlines():
        if line.strip():
            rows.append(json.loads(line))
    return rows
