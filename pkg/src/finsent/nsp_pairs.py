"""Balanced next-sentence-prediction pair datasets from a raw news corpus.

Input corpora are plain text with documents separated by blank lines. Output
pairs are line-delimited JSON with keys ``sentence_a``, ``sentence_b``,
``label`` (1 = isNext, 0 = notNext).
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import InsufficientCorpusError, InvalidSizeError

# Trailing words that end with '.' without ending a sentence.
ABBREVIATIONS = {
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.",
    "inc.", "ltd.", "corp.", "co.", "plc.", "vs.", "no.", "etc.",
    "e.g.", "i.e.", "approx.", "est.", "dept.", "u.s.", "u.k.", "eur.",
    "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.",
    "sept.", "oct.", "nov.", "dec.",
}

_BOUNDARY = re.compile(r"[.!?]+(?=\s+[A-Z0-9“\"])")


@dataclass
class ParagraphDoc:
    doc_id: int
    sentences: list[str]


@dataclass(frozen=True)
class SentencePair:
    sentence_a: str
    sentence_b: str
    label: int  # 1 = isNext, 0 = notNext
    origin: tuple  # (doc_id, position) for positives, (doc_id_a, doc_id_b) for negatives

    def to_dict(self) -> dict:
        return {"sentence_a": self.sentence_a, "sentence_b": self.sentence_b, "label": self.label}


def split_sentences(text: str) -> list[str]:
    """Rule-based splitting on ./!/? followed by whitespace and a capital.

    An abbreviation guard keeps tokens like "Mr." or "Inc." from ending a
    sentence. Deterministic, no model dependencies.
    """
    sentences: list[str] = []
    start = 0
    for match in _BOUNDARY.finditer(text):
        end = match.end()
        candidate = text[start:end].strip()
        last_word = candidate.rsplit(None, 1)[-1].lower() if candidate else ""
        if last_word in ABBREVIATIONS:
            continue
        if candidate:
            sentences.append(candidate)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def segment_corpus(raw: str) -> list[ParagraphDoc]:
    """Blank-line-delimited documents -> sentence-segmented ParagraphDocs."""
    docs: list[ParagraphDoc] = []
    for block in re.split(r"\n\s*\n", raw):
        text = " ".join(block.split())
        if not text:
            continue
        sentences = split_sentences(text)
        if sentences:
            docs.append(ParagraphDoc(doc_id=len(docs), sentences=sentences))
    return docs


def generate_pairs(
    docs: Sequence[ParagraphDoc],
    target_count: int,
    seed: int = 42,
) -> list[SentencePair]:
    """Exactly target_count/2 isNext and target_count/2 notNext pairs.

    Positives are adjacent sentence pairs sampled without replacement across
    documents. Each negative keeps a positive's A-side and draws its B-side
    from another adjacent pair anywhere in the corpus, rejecting the true
    successor. Output order is a deterministic shuffle under ``seed``.
    """
    if target_count <= 0 or target_count % 2 != 0:
        raise InvalidSizeError(f"target_count must be a positive even integer, got {target_count}")
    adjacent = [(doc.doc_id, pos) for doc in docs for pos in range(len(doc.sentences) - 1)]
    n_half = target_count // 2
    if len(adjacent) < n_half:
        raise InsufficientCorpusError(
            f"corpus has {len(adjacent)} adjacent pairs, need {n_half} for {target_count} examples"
        )
    if len(adjacent) < 2:
        raise InsufficientCorpusError("need at least 2 adjacent pairs to draw negatives")

    sentences = {doc.doc_id: doc.sentences for doc in docs}
    rng = random.Random(seed)
    chosen = rng.sample(adjacent, n_half)

    pairs: list[SentencePair] = []
    for doc_id, pos in chosen:
        pairs.append(
            SentencePair(sentences[doc_id][pos], sentences[doc_id][pos + 1], 1, (doc_id, pos))
        )
    for doc_id, pos in chosen:
        a = sentences[doc_id][pos]
        true_next = sentences[doc_id][pos + 1]
        for _ in range(1000):
            other_doc, other_pos = adjacent[rng.randrange(len(adjacent))]
            if (other_doc, other_pos) == (doc_id, pos):
                continue
            b = sentences[other_doc][other_pos + 1]
            # Origin-index check plus text equality: b must never be the true
            # successor of a; cross-document draws must also differ from a.
            if (other_doc, other_pos + 1) == (doc_id, pos + 1) or b == true_next:
                continue
            if other_doc != doc_id and b == a:
                continue
            pairs.append(SentencePair(a, b, 0, (doc_id, other_doc)))
            break
        else:
            raise InsufficientCorpusError("could not sample a non-successor negative B-side")

    rng.shuffle(pairs)
    return pairs


def hold_out_pairs(
    pairs: Sequence[SentencePair],
    test_size: int,
    seed: int = 42,
) -> tuple[list[SentencePair], list[SentencePair]]:
    """Deterministic stratified holdout; test set balanced 50/50 within one pair."""
    if not 0 <= test_size < len(pairs):
        raise InvalidSizeError(f"test_size must be in [0, {len(pairs)}), got {test_size}")
    rng = random.Random(seed)
    positives = [p for p in pairs if p.label == 1]
    negatives = [p for p in pairs if p.label == 0]
    rng.shuffle(positives)
    rng.shuffle(negatives)
    n_pos = test_size // 2
    n_neg = test_size - n_pos
    if n_pos > len(positives) or n_neg > len(negatives):
        raise InvalidSizeError(
            f"cannot stratify: need {n_pos} positives and {n_neg} negatives, "
            f"have {len(positives)}/{len(negatives)}"
        )
    test = positives[:n_pos] + negatives[:n_neg]
    train = positives[n_pos:] + negatives[n_neg:]
    rng.shuffle(test)
    rng.shuffle(train)
    return train, test


def pairs_to_jsonl(pairs: Sequence[SentencePair]) -> str:
    return "".join(json.dumps(p.to_dict(), ensure_ascii=False) + "\n" for p in pairs)


def pairs_from_jsonl(text: str | bytes) -> list[SentencePair]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    pairs = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        pairs.append(SentencePair(obj["sentence_a"], obj["sentence_b"], int(obj["label"]), ()))
    return pairs
