"""Exact parameter accounting for an encoder-classifier under layer freezing.

Counts cover the embedding block (word + position + type embeddings and their
LayerNorm), each encoder layer (self-attention projections, both LayerNorms,
and the feed-forward pair), the pooler, and the classification head. The
masked-language-model head is excluded: fine-tuning replaces it with the
classifier. All counts are exact integers; rounding happens only in reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

from .errors import InvalidConfigError, InvalidLayerError


@dataclass(frozen=True)
class EncoderConfig:
    vocab_size: int = 30522
    hidden: int = 768
    layers: int = 12
    intermediate: int = 3072
    max_positions: int = 512
    type_vocab: int = 2
    num_labels: int = 3
    include_pooler: bool = True

    def __post_init__(self):
        numeric = (
            self.vocab_size, self.hidden, self.layers,
            self.intermediate, self.max_positions, self.type_vocab, self.num_labels,
        )
        if any(v < 1 for v in numeric):
            raise InvalidConfigError(f"all dimensions must be positive: {self}")
        if self.num_labels < 2:
            raise InvalidConfigError("num_labels must be >= 2")


BASE_CONFIG = EncoderConfig()


def embedding_parameters(config: EncoderConfig) -> int:
    h = config.hidden
    return (config.vocab_size + config.max_positions + config.type_vocab) * h + 2 * h


def layer_parameters(config: EncoderConfig) -> int:
    h, i = config.hidden, config.intermediate
    attention = 4 * (h * h + h)   # Q, K, V, and output projections with bias
    norms = 2 * h + 2 * h         # post-attention and post-FFN LayerNorms
    ffn = (h * i + i) + (i * h + h)
    return attention + norms + ffn


def pooler_parameters(config: EncoderConfig) -> int:
    return config.hidden * config.hidden + config.hidden if config.include_pooler else 0


def classifier_parameters(config: EncoderConfig) -> int:
    return config.hidden * config.num_labels + config.num_labels


def total_parameters(config: EncoderConfig) -> int:
    return (
        embedding_parameters(config)
        + config.layers * layer_parameters(config)
        + pooler_parameters(config)
        + classifier_parameters(config)
    )


@dataclass(frozen=True)
class FreezePlan:
    freeze_through: str  # "none" | "embedding" | "layer_1".."layer_L"
    trainable_count: int
    total_count: int


def parse_freeze_through(value: str, layers: int) -> tuple[str, int]:
    """Normalize a freeze depth; returns (kind, k) with k = frozen layer count."""
    value = value.strip().lower().replace(" ", "_")
    if value == "none":
        return "none", 0
    if value == "embedding":
        return "embedding", 0
    if value.startswith("layer_"):
        try:
            k = int(value.split("_", 1)[1])
        except ValueError:
            raise InvalidLayerError(f"bad freeze depth {value!r}") from None
        if not 1 <= k <= layers:
            raise InvalidLayerError(f"layer {k} out of range 1..{layers}")
        return "layer", k
    raise InvalidLayerError(f"bad freeze depth {value!r}")


def trainable_after_freeze(config: EncoderConfig, freeze_through: str) -> FreezePlan:
    """Trainable count after freezing everything up to and including the depth.

    Freezing layer k freezes the embeddings and layers 1..k; freezing layer L
    leaves only the pooler and classification head trainable.
    """
    kind, k = parse_freeze_through(freeze_through, config.layers)
    total = total_parameters(config)
    frozen = 0
    if kind in ("embedding", "layer"):
        frozen += embedding_parameters(config)
    if kind == "layer":
        frozen += k * layer_parameters(config)
    return FreezePlan(freeze_through, total - frozen, total)


def freeze_table(config: EncoderConfig) -> list[FreezePlan]:
    """One row per freeze depth: embedding, then each layer 1..L."""
    rows = [trainable_after_freeze(config, "embedding")]
    for k in range(1, config.layers + 1):
        rows.append(trainable_after_freeze(config, f"layer_{k}"))
    return rows


def _millions(n: int) -> str:
    return f"{n / 1e6:.0f}M" if n >= 10_000_000 else f"{n / 1e6:.1f}M"


def freeze_table_csv(config: EncoderConfig) -> str:
    lines = ["frozen_through,trainable_parameters,trainable_millions"]
    for plan in freeze_table(config):
        lines.append(f"{plan.freeze_through},{plan.trainable_count},{_millions(plan.trainable_count)}")
    return "\n".join(lines) + "\n"


def freeze_table_text(config: EncoderConfig) -> str:
    lines = [f"{'Frozen through':<16} {'Trainable':>12} {'~M':>8}"]
    for plan in freeze_table(config):
        label = plan.freeze_through.replace("_", " ")
        lines.append(f"{label:<16} {plan.trainable_count:>12,} {_millions(plan.trainable_count):>8}")
    lines.append(f"{'total':<16} {total_parameters(config):>12,}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FineTuneConfig:
    learning_rate: float = 2e-5
    max_token_length: int = 512
    batch_size: int = 8
    weight_decay: float = 0.01
    dropout: float = 0.2
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    epochs: int = 4
    seed: int = 42

    def __post_init__(self):
        if min(self.learning_rate, self.max_token_length, self.batch_size, self.weight_decay) <= 0:
            raise InvalidConfigError("learning_rate, max_token_length, batch_size, weight_decay must be positive")
        if not 0 <= self.dropout < 1:
            raise InvalidConfigError("dropout must be in [0, 1)")
        if not (0 < self.adam_beta1 < 1 and 0 < self.adam_beta2 < 1):
            raise InvalidConfigError("adam betas must be in (0, 1)")
        if self.epochs < 0:
            raise InvalidConfigError("epochs must be >= 0")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str | bytes) -> "FineTuneConfig":
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        return cls(**json.loads(text))
