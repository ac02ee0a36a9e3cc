"""Readers for the toolkit's interchange files and batch encoding.

Sentiment datasets are JSONL records with id/text/label; NSP pair datasets
are JSONL with sentence_a/sentence_b/label (1 = isNext). Labels map to the
fixed ordinals negative=0, neutral=1, positive=2 and notNext=0, isNext=1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import BertTokenizer

from .model import NSP_CLASSES, SENTIMENT_CLASSES

SENTIMENT_INDEX = {name: i for i, name in enumerate(SENTIMENT_CLASSES)}


@dataclass
class Example:
    example_id: int | str
    text_a: str
    text_b: str | None
    label: int


def load_tokenizer(vocab_path: Path) -> BertTokenizer:
    return BertTokenizer(vocab_file=str(vocab_path), do_lower_case=True)


def read_sentiment_dataset(path: Path) -> list[Example]:
    examples = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        label = row["label"].strip().lower()
        if label not in SENTIMENT_INDEX:
            raise ValueError(f"unknown sentiment label {row['label']!r} in {path}")
        if not str(row["text"]).strip():
            raise ValueError(f"empty text for record {row.get('id')} in {path}")
        examples.append(Example(row["id"], row["text"], None, SENTIMENT_INDEX[label]))
    return examples


def read_pair_dataset(path: Path) -> list[Example]:
    examples = []
    for i, line in enumerate(path.read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        row = json.loads(line)
        label = int(row["label"])
        if label not in (0, 1):
            raise ValueError(f"pair label must be 0 or 1, got {row['label']!r} in {path}")
        examples.append(Example(i, row["sentence_a"], row["sentence_b"], label))
    return examples


def read_dataset(task: str, path: Path) -> list[Example]:
    if task == "sentiment":
        return read_sentiment_dataset(path)
    if task == "nsp":
        return read_pair_dataset(path)
    raise ValueError(f"unknown task {task!r}")


def class_names(task: str) -> tuple[str, ...]:
    return SENTIMENT_CLASSES if task == "sentiment" else NSP_CLASSES


def encode_batch(tokenizer, examples: list[Example], max_length: int):
    if examples[0].text_b is None:
        encoded = tokenizer(
            [e.text_a for e in examples],
            padding=True, truncation=True, max_length=max_length, return_tensors="pt",
        )
    else:
        encoded = tokenizer(
            [e.text_a for e in examples],
            [e.text_b for e in examples],
            padding=True, truncation=True, max_length=max_length, return_tensors="pt",
        )
    labels = torch.tensor([e.label for e in examples], dtype=torch.long)
    return encoded, labels
