import json
from pathlib import Path

import pytest

from finetune_harness.model import tiny_spec
from finetune_harness.training import init_base

REPO_ROOT = Path(__file__).resolve().parents[2]
VOCAB_PATH = REPO_ROOT / "data" / "vocab.txt"

SENTIMENT_TEXTS = [
    ("Operating profit rose to EUR 5 mn .", "positive"),
    ("Net sales fell by 12 % in 2009 .", "negative"),
    ("The company operates 40 stores in Finland .", "neutral"),
    ("Earnings per share climbed to EUR 1.2 .", "positive"),
    ("The group will cut 300 jobs .", "negative"),
    ("The order was booked in the paper segment .", "neutral"),
    ("Sales grew clearly in the fourth quarter .", "positive"),
    ("Shares dropped 8 % after the profit warning .", "negative"),
    ("The deal value was not disclosed .", "neutral"),
    ("Cash flow improved to EUR 20 mn .", "positive"),
    ("The plant will be idled for 10 weeks .", "negative"),
    ("The shares are listed in Helsinki .", "neutral"),
]


@pytest.fixture(scope="session")
def vocab_path() -> Path:
    return VOCAB_PATH


@pytest.fixture(scope="session")
def vocab_size() -> int:
    return len([line for line in VOCAB_PATH.read_text().splitlines() if line])


@pytest.fixture(scope="session")
def sentiment_dataset(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("data") / "sentiment.jsonl"
    rows = [
        {"id": i, "text": text, "label": label, "source": "phrasebank"}
        for i, (text, label) in enumerate(SENTIMENT_TEXTS * 2)
    ]
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    return path


@pytest.fixture(scope="session")
def pair_dataset(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("data") / "pairs.jsonl"
    rows = []
    for i in range(24):
        rows.append({
            "sentence_a": f"The company reported results for quarter {i} .",
            "sentence_b": f"Profit guidance was {'raised' if i % 2 else 'unchanged'} .",
            "label": i % 2,
        })
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    return path


@pytest.fixture(scope="session")
def sentiment_spec(vocab_size):
    return tiny_spec(vocab_size, num_labels=3)


@pytest.fixture(scope="session")
def nsp_spec(vocab_size):
    return tiny_spec(vocab_size, num_labels=2)


@pytest.fixture(scope="session")
def sentiment_base(sentiment_spec, tmp_path_factory) -> Path:
    return init_base(sentiment_spec, "sentiment", tmp_path_factory.mktemp("base") / "model", seed=7)


@pytest.fixture(scope="session")
def nsp_base(nsp_spec, tmp_path_factory) -> Path:
    return init_base(nsp_spec, "nsp", tmp_path_factory.mktemp("base") / "model", seed=7)
