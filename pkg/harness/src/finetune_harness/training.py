"""Fine-tuning loop: freeze plan, Adam-style optimizer, per-epoch loss log.

The logged trainable-parameter count is part of the training contract: it
must equal the toolkit's freeze-table integers for the same encoder spec and
freeze depth, which the tests check through the toolkit CLI.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import torch

from .data import encode_batch, load_tokenizer, read_dataset
from .model import (
    EncoderSpec,
    apply_freeze,
    build_model,
    save_model,
    total_parameters,
    trainable_parameters,
)

FINETUNE_DEFAULTS = {
    "learning_rate": 2e-5,
    "max_token_length": 512,
    "batch_size": 8,
    "weight_decay": 0.01,
    "dropout": 0.2,
    "adam_beta1": 0.9,
    "adam_beta2": 0.999,
    "epochs": 4,
    "seed": 42,
}


def load_finetune_config(path: Path | None) -> dict:
    config = dict(FINETUNE_DEFAULTS)
    if path is not None:
        config.update(json.loads(Path(path).read_text()))
    unknown = set(config) - set(FINETUNE_DEFAULTS)
    if unknown:
        raise ValueError(f"unknown fine-tune config keys: {sorted(unknown)}")
    return config


@dataclass
class TrainingRun:
    task: str  # "sentiment" | "nsp"
    encoder_spec: EncoderSpec
    config: dict
    freeze_through: str
    dataset_path: Path
    vocab_path: Path
    output_dir: Path
    base_weights: Path | None = None  # pretrained starting point; fresh init if absent
    epoch_losses: list[float] = field(default_factory=list)


def init_base(spec: EncoderSpec, task: str, out_dir: Path, seed: int = 42) -> Path:
    """Materialize a randomly initialized base model to fine-tune from."""
    model = build_model(spec, dropout=0.0, seed=seed)
    save_model(model, spec, task, out_dir)
    return out_dir


def train(run: TrainingRun) -> dict:
    """Fine-tune per the run description; returns the run summary dict."""
    config = run.config
    torch.manual_seed(config["seed"])

    model = build_model(run.encoder_spec, dropout=config["dropout"])
    if run.base_weights is not None:
        state = torch.load(run.base_weights / "weights.pt", map_location="cpu", weights_only=True)
        model.load_state_dict(state)

    apply_freeze(model, run.freeze_through)
    trainable = trainable_parameters(model)

    tokenizer = load_tokenizer(run.vocab_path)
    examples = read_dataset(run.task, run.dataset_path)
    if not examples:
        raise ValueError(f"no training examples in {run.dataset_path}")
    max_length = min(config["max_token_length"], run.encoder_spec.max_positions)

    optimizer = torch.optim.AdamW(
        (p for p in model.parameters() if p.requires_grad),
        lr=config["learning_rate"],
        betas=(config["adam_beta1"], config["adam_beta2"]),
        weight_decay=config["weight_decay"],
    )

    batch_size = config["batch_size"]
    order = list(range(len(examples)))
    model.train()
    for epoch in range(config["epochs"]):
        random.Random(config["seed"] + epoch).shuffle(order)
        total_loss = 0.0
        n_batches = 0
        for start in range(0, len(order), batch_size):
            batch = [examples[i] for i in order[start : start + batch_size]]
            encoded, labels = encode_batch(tokenizer, batch, max_length)
            output = model(**encoded, labels=labels)
            optimizer.zero_grad()
            output.loss.backward()
            optimizer.step()
            total_loss += output.loss.item()
            n_batches += 1
        run.epoch_losses.append(total_loss / n_batches)

    save_model(model, run.encoder_spec, run.task, run.output_dir)
    summary = {
        "task": run.task,
        "freeze_through": run.freeze_through,
        "trainable_parameters": trainable,
        "total_parameters": total_parameters(model),
        "epochs": config["epochs"],
        "n_examples": len(examples),
        "epoch_losses": run.epoch_losses,
        "config": config,
    }
    (run.output_dir / "run.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    loss_log = "epoch,mean_loss\n" + "".join(
        f"{i},{loss:.6f}\n" for i, loss in enumerate(run.epoch_losses)
    )
    (run.output_dir / "loss_log.csv").write_text(loss_log)
    return summary
