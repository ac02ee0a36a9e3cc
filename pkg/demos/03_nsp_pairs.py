"""Balanced next-sentence-prediction pairs from a raw news corpus.

Segments blank-line-delimited articles into sentences, samples adjacent pairs
as isNext examples, pairs their openers with unrelated sentences as notNext,
and holds out a balanced test set.
"""

from collections import Counter
from pathlib import Path

from finsent.nsp_pairs import generate_pairs, hold_out_pairs, pairs_to_jsonl, segment_corpus

DATA = Path(__file__).resolve().parent.parent / "data"
OUT = Path(__file__).resolve().parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    docs = segment_corpus((DATA / "news_sample.txt").read_text())
    n_adjacent = sum(len(d.sentences) - 1 for d in docs)
    print(f"{len(docs)} documents, {n_adjacent} adjacent sentence pairs available")

    pairs = generate_pairs(docs, target_count=300, seed=42)
    print(f"generated {len(pairs)} pairs: {Counter(p.label for p in pairs)}")

    train, test = hold_out_pairs(pairs, test_size=60, seed=42)
    print(f"holdout: {len(train)} train / {len(test)} test "
          f"(test balance {Counter(p.label for p in test)})")

    (OUT / "pairs_train.jsonl").write_text(pairs_to_jsonl(train))
    (OUT / "pairs_test.jsonl").write_text(pairs_to_jsonl(test))

    print("\nExample isNext pair:")
    positive = next(p for p in pairs if p.label == 1)
    print(f"  A: {positive.sentence_a}")
    print(f"  B: {positive.sentence_b}")
    print("Example notNext pair:")
    negative = next(p for p in pairs if p.label == 0)
    print(f"  A: {negative.sentence_a}")
    print(f"  B: {negative.sentence_b}")


if __name__ == "__main__":
    main()
