"""Model construction, freeze plans, parameter accounting, and artifacts.

The encoder spec file uses the same keys as the toolkit's freeze-table
config (vocab_size, hidden, layers, intermediate, max_positions, type_vocab,
num_labels, include_pooler), so one JSON file drives both the parameter
table and the actual model. Counts here must match that table exactly; the
tests enforce it through the toolkit's CLI.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import BertConfig, BertForSequenceClassification

SENTIMENT_CLASSES = ("negative", "neutral", "positive")
NSP_CLASSES = ("notNext", "isNext")  # index 1 = isNext, matching the pair labels

TASK_CLASSES = {"sentiment": SENTIMENT_CLASSES, "nsp": NSP_CLASSES}


@dataclass
class EncoderSpec:
    vocab_size: int
    hidden: int
    layers: int
    intermediate: int
    max_positions: int
    type_vocab: int
    num_labels: int
    include_pooler: bool = True

    @classmethod
    def from_json(cls, text: str | bytes) -> "EncoderSpec":
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        return cls(**json.loads(text))

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"


def tiny_spec(vocab_size: int, num_labels: int) -> EncoderSpec:
    """Two-layer configuration small enough for CPU smoke training."""
    return EncoderSpec(
        vocab_size=vocab_size, hidden=32, layers=2, intermediate=64,
        max_positions=64, type_vocab=2, num_labels=num_labels,
    )


def _attention_heads(hidden: int) -> int:
    return next(h for h in (12, 8, 4, 2, 1) if hidden % h == 0)


def build_model(spec: EncoderSpec, dropout: float = 0.1, seed: int | None = None):
    if not spec.include_pooler:
        raise ValueError("this harness always trains with the pooler head")
    if seed is not None:
        torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=spec.vocab_size,
        hidden_size=spec.hidden,
        num_hidden_layers=spec.layers,
        num_attention_heads=_attention_heads(spec.hidden),
        intermediate_size=spec.intermediate,
        max_position_embeddings=spec.max_positions,
        type_vocab_size=spec.type_vocab,
        num_labels=spec.num_labels,
        hidden_dropout_prob=dropout,
        attention_probs_dropout_prob=dropout,
    )
    return BertForSequenceClassification(config)


def apply_freeze(model, freeze_through: str) -> None:
    """Freeze the embedding block and a prefix of encoder layers.

    Same vocabulary as the toolkit's freeze planner: "none", "embedding",
    or "layer_k" (freezes embeddings plus layers 1..k).
    """
    value = freeze_through.strip().lower().replace(" ", "_")
    n_layers = len(model.bert.encoder.layer)
    if value == "none":
        return
    for p in model.bert.embeddings.parameters():
        p.requires_grad = False
    if value == "embedding":
        return
    if value.startswith("layer_"):
        k = int(value.split("_", 1)[1])
        if not 1 <= k <= n_layers:
            raise ValueError(f"layer {k} out of range 1..{n_layers}")
        for layer in model.bert.encoder.layer[:k]:
            for p in layer.parameters():
                p.requires_grad = False
        return
    raise ValueError(f"bad freeze depth {freeze_through!r}")


def trainable_parameters(model) -> int:
    return sum(p.numel() for p in model.parameters() if p.requires_grad)


def total_parameters(model) -> int:
    return sum(p.numel() for p in model.parameters())


# -- artifacts -----------------------------------------------------------------

def save_model(model, spec: EncoderSpec, task: str, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out_dir / "weights.pt")
    meta = {"task": task, "classes": list(TASK_CLASSES[task]), "encoder": spec.__dict__}
    (out_dir / "model.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def load_model(model_dir: Path, dropout: float = 0.0):
    meta = json.loads((model_dir / "model.json").read_text())
    spec = EncoderSpec(**meta["encoder"])
    model = build_model(spec, dropout=dropout)
    state = torch.load(model_dir / "weights.pt", map_location="cpu", weights_only=True)
    model.load_state_dict(state)
    model.eval()
    return model, spec, meta["task"]


def states_equal(a: dict, b: dict) -> bool:
    if a.keys() != b.keys():
        return False
    return all(torch.equal(a[k], b[k]) for k in a)
