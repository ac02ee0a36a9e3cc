"""Long-sentence corpus builders: NSP-gated sequential and ungated random concatenation.

The gate walks a candidate run pair-by-pair; in concatenate mode the left side
of the i-th check is the space-join of the first i+1 sentences. A score less
than or equal to 0.5 fails the run at that pair and stops scoring immediately.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .corpus import LabeledSentence, SentimentLabel
from .errors import TooFewSentencesError
from .wordpiece import Vocabulary, token_count

NSP_THRESHOLD = 0.5
DEFAULT_MAX_TOKENS = 512
DEFAULT_RUN_LENGTH_RANGE = (2, 6)


@dataclass(frozen=True)
class NspDecision:
    pair_index: int
    score: float

    @property
    def passed(self) -> bool:
        return self.score > NSP_THRESHOLD


@dataclass
class ConcatSample:
    text: str
    label: SentimentLabel
    part_ids: list[int]
    n_tokens: int
    method: str  # "random" | "sequential"


@dataclass
class RejectedRun:
    run_index: int
    label: SentimentLabel
    part_ids: list[int]
    reason: str  # "nsp_gate" | "token_cap"
    failed_pair_index: int | None = None


def predict_multiple_nsp(
    sentences: Sequence[str],
    concatenate: bool,
    predict_nsp: Callable[[str, str], float],
) -> tuple[bool, list[NspDecision]]:
    """Check whether consecutive sentences chain together under the NSP scorer.

    Returns (valid, decisions) where decisions records every scorer call made.
    Scoring stops at the first pair with score <= 0.5; with ``concatenate``
    the left side grows to the join of all sentences seen so far.
    """
    if len(sentences) < 2:
        raise TooFewSentencesError(f"need at least 2 sentences, got {len(sentences)}")
    decisions: list[NspDecision] = []
    valid = True
    for i in range(len(sentences) - 1):
        if concatenate:
            sentence_a = " ".join(sentences[: i + 1])
        else:
            sentence_a = sentences[i]
        sentence_b = sentences[i + 1]
        decision = NspDecision(i, predict_nsp(sentence_a, sentence_b))
        decisions.append(decision)
        if not decision.passed:
            valid = False
            break
    return valid, decisions


def _propose_runs(
    records: Sequence[LabeledSentence],
    run_length_range: tuple[int, int],
    seed: int,
) -> list[tuple[SentimentLabel, list[LabeledSentence]]]:
    """Deterministically partition each label's pool into candidate runs.

    Runs never mix labels, every record lands in at most one run, and the
    proposal stream depends only on (records, range, seed) so that gated and
    ungated builds see identical candidates.
    """
    lo, hi = run_length_range
    if lo < 2 or hi < lo:
        raise ValueError(f"run_length_range must satisfy 2 <= lo <= hi, got {run_length_range}")
    rng = random.Random(seed)
    runs: list[tuple[SentimentLabel, list[LabeledSentence]]] = []
    for label in SentimentLabel:
        pool = [r for r in records if r.label == label]
        rng.shuffle(pool)
        pos = 0
        while len(pool) - pos >= 2:
            length = min(rng.randint(lo, hi), len(pool) - pos)
            runs.append((label, pool[pos : pos + length]))
            pos += length
    return runs


def _assemble(run: Sequence[LabeledSentence]) -> str:
    # Single-space join; phrasebank sentences already carry terminal punctuation.
    return " ".join(r.text for r in run)


def build_sequential_concat(
    records: Sequence[LabeledSentence],
    scorer,
    vocab: Vocabulary,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    run_length_range: tuple[int, int] = DEFAULT_RUN_LENGTH_RANGE,
    seed: int = 42,
) -> tuple[list[ConcatSample], list[RejectedRun]]:
    """NSP-gated concatenation: a run is emitted only if every prefix pair passes.

    Rejected runs are returned for the audit log; their sentences are not
    recycled, keeping the proposal stream identical to the random builder's.
    """
    samples: list[ConcatSample] = []
    rejected: list[RejectedRun] = []
    for run_index, (label, run) in enumerate(_propose_runs(records, run_length_range, seed)):
        part_ids = [r.id for r in run]
        text = _assemble(run)
        n = token_count(text, vocab, include_special=True)
        if n > max_tokens:
            rejected.append(RejectedRun(run_index, label, part_ids, "token_cap"))
            continue
        valid, decisions = predict_multiple_nsp([r.text for r in run], True, scorer.predict_nsp)
        if not valid:
            rejected.append(
                RejectedRun(run_index, label, part_ids, "nsp_gate", decisions[-1].pair_index)
            )
            continue
        samples.append(ConcatSample(text, label, part_ids, n, "sequential"))
    return samples, rejected


def build_random_concat(
    records: Sequence[LabeledSentence],
    vocab: Vocabulary,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    run_length_range: tuple[int, int] = DEFAULT_RUN_LENGTH_RANGE,
    seed: int = 42,
) -> tuple[list[ConcatSample], list[RejectedRun]]:
    """Same proposal stream as the sequential builder but without the NSP gate."""
    samples: list[ConcatSample] = []
    rejected: list[RejectedRun] = []
    for run_index, (label, run) in enumerate(_propose_runs(records, run_length_range, seed)):
        part_ids = [r.id for r in run]
        text = _assemble(run)
        n = token_count(text, vocab, include_special=True)
        if n > max_tokens:
            rejected.append(RejectedRun(run_index, label, part_ids, "token_cap"))
            continue
        samples.append(ConcatSample(text, label, part_ids, n, "random"))
    return samples, rejected


def concat_samples_to_records(samples: Sequence[ConcatSample]) -> list[LabeledSentence]:
    """Interchange-format view of a build, with sources concat_random/concat_sequential."""
    return [
        LabeledSentence(
            id=i,
            text=s.text,
            label=s.label,
            source=f"concat_{s.method}",
            n_tokens=s.n_tokens,
        )
        for i, s in enumerate(samples)
    ]


def rejected_runs_csv(rejected: Sequence[RejectedRun]) -> str:
    lines = ["run_index,label,part_ids,reason,failed_pair_index"]
    for r in rejected:
        failed = "" if r.failed_pair_index is None else str(r.failed_pair_index)
        lines.append(f"{r.run_index},{r.label.name},{'|'.join(map(str, r.part_ids))},{r.reason},{failed}")
    return "\n".join(lines) + "\n"
