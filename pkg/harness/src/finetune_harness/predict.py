"""Batch inference writing the evaluation-ready predictions format."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import class_names, encode_batch, load_tokenizer, read_dataset
from .model import load_model


def predict_file(
    model_dir: Path,
    dataset_path: Path,
    vocab_path: Path,
    output_path: Path,
    batch_size: int = 32,
) -> int:
    """Write one JSONL line {"id", "predicted", "probs"} per input record, in order."""
    model, spec, task = load_model(model_dir)
    tokenizer = load_tokenizer(vocab_path)
    examples = read_dataset(task, dataset_path)
    names = class_names(task)
    max_length = spec.max_positions

    lines = []
    with torch.no_grad():
        for start in range(0, len(examples), batch_size):
            batch = examples[start : start + batch_size]
            encoded, _ = encode_batch(tokenizer, batch, max_length)
            probs = torch.softmax(model(**encoded).logits, dim=-1)
            for example, vector in zip(batch, probs):
                values = [float(v) for v in vector]
                lines.append(
                    json.dumps(
                        {
                            "id": example.example_id,
                            "predicted": names[int(vector.argmax())],
                            "probs": dict(zip(names, values)),
                        }
                    )
                )
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text("\n".join(lines) + "\n" if lines else "")
    return len(lines)
