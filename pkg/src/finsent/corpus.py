"""Financial phrasebank ingestion, label stats, splitting, and synthetic-sample merging.

The on-disk interchange format used throughout the toolkit is line-delimited
JSON with keys ``id``, ``text``, ``label``, ``source`` and optional
``n_tokens`` (UTF-8). Phrasebank source files are one ``<sentence>@<label>``
record per line.
"""

from __future__ import annotations

import enum
import json
import random
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    EncodingError,
    InvalidRatiosError,
    MalformedLineError,
    MalformedRecordError,
)

AGREEMENT_LEVELS = (50, 66, 75, 100)

SOURCES = ("phrasebank", "concat_random", "concat_sequential", "synthetic")


class SentimentLabel(enum.IntEnum):
    """Three-way sentiment with a fixed ordinal encoding."""

    negative = 0
    neutral = 1
    positive = 2

    @classmethod
    def from_name(cls, name: str) -> "SentimentLabel":
        try:
            return cls[name.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown sentiment label: {name!r}") from None


LABEL_NAMES = tuple(label.name for label in SentimentLabel)


@dataclass
class LabeledSentence:
    id: int
    text: str
    label: SentimentLabel
    source: str = "phrasebank"
    n_tokens: int | None = None

    def to_dict(self) -> dict:
        d = {"id": self.id, "text": self.text, "label": self.label.name, "source": self.source}
        if self.n_tokens is not None:
            d["n_tokens"] = self.n_tokens
        return d


@dataclass
class CorpusStats:
    count: int
    pct_negative: float
    pct_neutral: float
    pct_positive: float

    def as_row(self) -> tuple:
        return (self.pct_negative, self.pct_neutral, self.pct_positive, self.count)


def parse_phrasebank(raw: bytes, encoding: str = "iso-8859-1") -> list[LabeledSentence]:
    """Parse the ``<sentence>@<label>`` line format into labeled records.

    The public distribution is not UTF-8, so the default encoding is
    ISO-8859-1; a failed decode in the declared encoding falls back to UTF-8
    before giving up. The sentence is everything before the LAST ``@`` since
    sentences may themselves contain ``@``.
    """
    try:
        text = raw.decode(encoding)
    except (UnicodeDecodeError, LookupError) as exc:
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise EncodingError(f"input is not valid {encoding} (nor UTF-8): {exc}") from exc

    records = []
    # Records are newline-delimited; str.splitlines would also break on
    # control characters a sentence may legitimately contain.
    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.strip()
        if not line:
            continue
        if "@" not in line:
            raise MalformedLineError(line_no, "no '@' separator")
        sentence, label_text = line.rsplit("@", 1)
        sentence = sentence.strip()
        if not sentence:
            raise MalformedLineError(line_no, "empty sentence")
        try:
            label = SentimentLabel.from_name(label_text)
        except ValueError:
            raise MalformedLineError(line_no, f"unknown label {label_text.strip()!r}") from None
        records.append(LabeledSentence(id=len(records), text=sentence, label=label))
    return records


def serialize_phrasebank(records: Iterable[LabeledSentence]) -> str:
    """Inverse of :func:`parse_phrasebank` (modulo record ids)."""
    return "".join(f"{r.text}@{r.label.name}\n" for r in records)


def label_distribution(records: Sequence[LabeledSentence]) -> CorpusStats:
    """Per-class percentages (one decimal, as reported) plus the record count."""
    total = len(records)
    if total == 0:
        return CorpusStats(0, 0.0, 0.0, 0.0)
    counts = Counter(r.label for r in records)
    pct = [round(100.0 * counts.get(label, 0) / total, 1) for label in SentimentLabel]
    return CorpusStats(total, pct[0], pct[1], pct[2])


def split_dataset(
    records: Sequence[LabeledSentence],
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 42,
) -> tuple[list[LabeledSentence], list[LabeledSentence], list[LabeledSentence]]:
    """Stratified train/validation/test split, deterministic under ``seed``.

    Each class is split independently: train takes floor(ratio * n) records,
    the remainder is divided between validation and test in proportion to
    their ratios (validation floored, test absorbing the rest).
    """
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise InvalidRatiosError(f"ratios must be three positive fractions, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise InvalidRatiosError(f"ratios must sum to 1, got sum={sum(ratios)!r}")

    rng = random.Random(seed)
    train: list[LabeledSentence] = []
    val: list[LabeledSentence] = []
    test: list[LabeledSentence] = []
    r_train, r_val, r_test = ratios
    for label in SentimentLabel:
        group = [r for r in records if r.label == label]
        rng.shuffle(group)
        n = len(group)
        n_train = int(n * r_train)
        remainder = n - n_train
        n_val = int(remainder * r_val / (r_val + r_test))
        train.extend(group[:n_train])
        val.extend(group[n_train : n_train + n_val])
        test.extend(group[n_train + n_val :])
    return train, val, test


_WHITESPACE_RUN = re.compile(r"\s+")


def ingest_synthetic(raw: str | bytes) -> list[LabeledSentence]:
    """Validate, normalize, and de-duplicate line-delimited synthetic records.

    Each non-blank line must be a JSON object with ``text`` and ``label``
    fields. Labels are matched case-insensitively; whitespace runs collapse to
    a single space; exact duplicates (after normalization) keep the first
    occurrence only.
    """
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    records: list[LabeledSentence] = []
    seen: set[str] = set()
    index = 0
    for line in raw.splitlines():
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            raise MalformedRecordError(index, "not valid JSON") from None
        if not isinstance(obj, dict) or "text" not in obj or "label" not in obj:
            raise MalformedRecordError(index, "missing 'text' or 'label' field")
        text = _WHITESPACE_RUN.sub(" ", str(obj["text"])).strip()
        if not text:
            raise MalformedRecordError(index, "empty text")
        try:
            label = SentimentLabel.from_name(str(obj["label"]))
        except ValueError:
            raise MalformedRecordError(index, f"unknown label {obj['label']!r}") from None
        if text not in seen:
            seen.add(text)
            records.append(LabeledSentence(id=len(records), text=text, label=label, source="synthetic"))
        index += 1
    return records


def merge_corpora(parts: Sequence[Sequence[LabeledSentence]]) -> list[LabeledSentence]:
    """Concatenate datasets in order, re-assigning unique sequential ids."""
    merged = []
    for part in parts:
        for r in part:
            merged.append(
                LabeledSentence(id=len(merged), text=r.text, label=r.label, source=r.source, n_tokens=r.n_tokens)
            )
    return merged


def source_counts(records: Iterable[LabeledSentence]) -> dict[str, int]:
    return dict(Counter(r.source for r in records))


# -- interchange format -------------------------------------------------------

def dataset_to_jsonl(records: Iterable[LabeledSentence]) -> str:
    return "".join(json.dumps(r.to_dict(), ensure_ascii=False) + "\n" for r in records)


def dataset_from_jsonl(text: str | bytes) -> list[LabeledSentence]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    records = []
    for index, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        obj = json.loads(line)
        records.append(
            LabeledSentence(
                id=int(obj["id"]),
                text=obj["text"],
                label=SentimentLabel.from_name(obj["label"]),
                source=obj.get("source", "phrasebank"),
                n_tokens=obj.get("n_tokens"),
            )
        )
    return records
