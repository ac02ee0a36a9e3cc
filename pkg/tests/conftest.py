import os
from pathlib import Path

import pytest

from finsent.corpus import parse_phrasebank
from finsent.wordpiece import load_vocab

# Point FINSENT_DATA_DIR at a directory holding the real phrasebank files and
# a real uncased vocab.txt to run the suite against the public data instead
# of the shipped stand-ins.
DATA_DIR = Path(os.environ.get("FINSENT_DATA_DIR", Path(__file__).resolve().parent.parent / "data"))

PHRASEBANK_FILES = {
    100: "Sentences_AllAgree.txt",
    75: "Sentences_75Agree.txt",
    66: "Sentences_66Agree.txt",
    50: "Sentences_50Agree.txt",
}


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def vocab():
    return load_vocab((DATA_DIR / "vocab.txt").read_bytes())


@pytest.fixture(scope="session")
def phrasebank_50():
    return parse_phrasebank((DATA_DIR / PHRASEBANK_FILES[50]).read_bytes())


@pytest.fixture(scope="session")
def phrasebank_100():
    return parse_phrasebank((DATA_DIR / PHRASEBANK_FILES[100]).read_bytes())
