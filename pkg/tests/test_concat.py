import random

import pytest

from finsent.concat import (
    NspDecision,
    build_random_concat,
    build_sequential_concat,
    concat_samples_to_records,
    predict_multiple_nsp,
    rejected_runs_csv,
)
from finsent.corpus import LabeledSentence, SentimentLabel
from finsent.errors import TooFewSentencesError
from finsent.scoring import MockBackend
from finsent.wordpiece import load_vocab


class ConstantScorer:
    def __init__(self, value):
        self.value = value

    def predict_nsp(self, a, b):
        return self.value


class RecordingScorer:
    def __init__(self, inner):
        self.inner = inner
        self.calls = []

    def predict_nsp(self, a, b):
        self.calls.append((a, b))
        return self.inner.predict_nsp(a, b)


def small_vocab():
    words = [f"w{i}" for i in range(30)] + ["word", "."]
    return load_vocab("\n".join(["[UNK]", "[CLS]", "[SEP]"] + words).encode())


def records_of(texts, label=SentimentLabel.neutral, start_id=0):
    return [LabeledSentence(start_id + i, t, label) for i, t in enumerate(texts)]


# -- predict_multiple_nsp -----------------------------------------------------

def test_all_pairs_pass_with_high_scorer():
    valid, decisions = predict_multiple_nsp(["a", "b", "c"], False, ConstantScorer(1.0).predict_nsp)
    assert valid is True
    assert len(decisions) == 2
    assert all(d.passed for d in decisions)


def test_early_exit_on_first_failure():
    valid, decisions = predict_multiple_nsp(["a", "b", "c", "d"], False, ConstantScorer(0.4).predict_nsp)
    assert valid is False
    assert len(decisions) == 1
    assert decisions[0].pair_index == 0


def test_score_exactly_half_fails_gate():
    valid, decisions = predict_multiple_nsp(["a", "b"], False, ConstantScorer(0.5).predict_nsp)
    assert valid is False
    assert decisions[0].passed is False


def test_too_few_sentences():
    with pytest.raises(TooFewSentencesError):
        predict_multiple_nsp(["only one"], False, ConstantScorer(1.0).predict_nsp)


def test_concatenate_mode_grows_prefix():
    scorer = RecordingScorer(ConstantScorer(1.0))
    sentences = ["First .", "Second .", "Third .", "Fourth ."]
    valid, decisions = predict_multiple_nsp(sentences, True, scorer.predict_nsp)
    assert valid is True
    assert len(scorer.calls) == 3
    for i, (a, b) in enumerate(scorer.calls):
        assert a == " ".join(sentences[: i + 1])
        assert b == sentences[i + 1]


def test_adjacent_mode_uses_single_sentences():
    scorer = RecordingScorer(ConstantScorer(1.0))
    sentences = ["First .", "Second .", "Third ."]
    predict_multiple_nsp(sentences, False, scorer.predict_nsp)
    assert scorer.calls == [("First .", "Second ."), ("Second .", "Third .")]


def test_call_count_matches_first_failure_randomized():
    backend = MockBackend()
    rng = random.Random(1234)
    for _ in range(200):
        sentences = [f"sentence {rng.randrange(10_000)} ." for _ in range(rng.randint(2, 8))]
        concatenate = rng.random() < 0.5
        # Independent replay of the gate's expected behaviour.
        expected_failure = None
        for i in range(len(sentences) - 1):
            a = " ".join(sentences[: i + 1]) if concatenate else sentences[i]
            if backend.predict_nsp(a, sentences[i + 1]) <= 0.5:
                expected_failure = i
                break
        valid, decisions = predict_multiple_nsp(sentences, concatenate, backend.predict_nsp)
        if expected_failure is None:
            assert valid is True
            assert len(decisions) == len(sentences) - 1
        else:
            assert valid is False
            assert len(decisions) == expected_failure + 1
            assert decisions[-1].pair_index == expected_failure


def test_decision_passed_consistency():
    assert NspDecision(0, 0.500001).passed is True
    assert NspDecision(0, 0.5).passed is False
    assert NspDecision(0, 0.0).passed is False


# -- builders -----------------------------------------------------------------

def test_sequential_gate_rejects_everything_with_zero_scorer():
    vocab = small_vocab()
    records = records_of([f"w{i} ." for i in range(10)])
    samples, rejected = build_sequential_concat(records, ConstantScorer(0.0), vocab, seed=5)
    assert samples == []
    assert rejected, "every proposed run should be audited"
    assert all(r.reason == "nsp_gate" and r.failed_pair_index == 0 for r in rejected)


def test_sequential_token_cap_rejects_long_runs():
    vocab = small_vocab()
    long_text = " ".join(["word"] * 300)
    records = records_of([long_text, long_text + " ."])
    samples, rejected = build_sequential_concat(
        records, ConstantScorer(1.0), vocab, run_length_range=(2, 2), seed=5
    )
    assert samples == []
    assert [r.reason for r in rejected] == ["token_cap"]


def test_sequential_pairs_of_two_with_passing_scorer():
    vocab = small_vocab()
    records = records_of([f"w{i} ." for i in range(10)])
    samples, rejected = build_sequential_concat(
        records, ConstantScorer(1.0), vocab, run_length_range=(2, 2), seed=5
    )
    assert len(samples) == 5
    assert rejected == []
    assert all(len(s.part_ids) == 2 for s in samples)
    used = [pid for s in samples for pid in s.part_ids]
    assert sorted(used) == list(range(10))


def test_random_partition_of_four():
    vocab = small_vocab()
    records = records_of(["w0 .", "w1 .", "w2 .", "w3 ."], SentimentLabel.positive)
    samples, rejected = build_random_concat(records, vocab, run_length_range=(2, 2), seed=9)
    assert len(samples) == 2
    assert sorted(pid for s in samples for pid in s.part_ids) == [0, 1, 2, 3]
    assert all(s.label == SentimentLabel.positive for s in samples)
    assert all(s.method == "random" for s in samples)


def test_mixed_label_pool_yields_single_label_samples():
    vocab = small_vocab()
    records = (
        records_of([f"w{i} ." for i in range(6)], SentimentLabel.negative)
        + records_of([f"w{i + 6} ." for i in range(6)], SentimentLabel.positive, start_id=6)
    )
    by_id = {r.id: r.label for r in records}
    samples, _ = build_random_concat(records, vocab, seed=11)
    for sample in samples:
        labels = {by_id[pid] for pid in sample.part_ids}
        assert labels == {sample.label}


def test_parts_disjoint_across_samples():
    vocab = small_vocab()
    records = records_of([f"w{i % 30} {'word ' * (i % 4)}." for i in range(200)])
    samples, _ = build_sequential_concat(records, MockBackend(), vocab, seed=13)
    used = [pid for s in samples for pid in s.part_ids]
    assert len(used) == len(set(used))


def test_builds_deterministic():
    vocab = small_vocab()
    records = records_of([f"w{i % 30} ." for i in range(60)])
    first = build_sequential_concat(records, MockBackend(), vocab, seed=21)
    second = build_sequential_concat(records, MockBackend(), vocab, seed=21)
    assert first == second
    third = build_random_concat(records, vocab, seed=21)
    assert third == build_random_concat(records, vocab, seed=21)


def test_sequential_subset_of_random_under_same_seed():
    vocab = small_vocab()
    records = records_of([f"w{i % 30} w{(i * 7) % 30} ." for i in range(120)])
    sequential, _ = build_sequential_concat(records, MockBackend(), vocab, seed=17)
    rand, _ = build_random_concat(records, vocab, seed=17)
    random_parts = {tuple(s.part_ids) for s in rand}
    assert all(tuple(s.part_ids) in random_parts for s in sequential)
    assert len(sequential) <= len(rand)


def test_token_counts_within_cap_and_recorded():
    vocab = small_vocab()
    records = records_of([f"w{i % 30} word ." for i in range(40)])
    samples, _ = build_random_concat(records, vocab, seed=3)
    from finsent.wordpiece import token_count

    for sample in samples:
        assert sample.n_tokens <= 512
        assert sample.n_tokens == token_count(sample.text, vocab, include_special=True)
        assert len(sample.part_ids) >= 2


def test_records_view_and_audit_csv():
    vocab = small_vocab()
    records = records_of([f"w{i} ." for i in range(10)])
    samples, _ = build_sequential_concat(
        records, ConstantScorer(1.0), vocab, run_length_range=(2, 2), seed=5
    )
    as_records = concat_samples_to_records(samples)
    assert all(r.source == "concat_sequential" for r in as_records)
    assert all(r.n_tokens == s.n_tokens for r, s in zip(as_records, samples))
    assert [r.id for r in as_records] == list(range(len(samples)))

    _, rejected = build_sequential_concat(records, ConstantScorer(0.0), vocab, seed=5)
    csv = rejected_runs_csv(rejected)
    assert csv.splitlines()[0] == "run_index,label,part_ids,reason,failed_pair_index"
    assert len(csv.splitlines()) == len(rejected) + 1
