"""Random vs. NSP-gated sequential concatenation over the same proposals.

Both builders walk identical seeded run proposals within each sentiment
class; the sequential builder additionally requires every growing prefix to
pass the next-sentence gate, so its output is always a subset of the random
build. Uses the deterministic mock scorer, so results reproduce anywhere.
"""

from collections import Counter
from pathlib import Path

from finsent.concat import build_random_concat, build_sequential_concat
from finsent.corpus import parse_phrasebank
from finsent.scoring import MockBackend
from finsent.wordpiece import load_vocab

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    vocab = load_vocab((DATA / "vocab.txt").read_bytes())
    records = parse_phrasebank((DATA / "Sentences_50Agree.txt").read_bytes())
    print(f"input: {len(records)} labeled sentences")

    random_samples, random_rejected = build_random_concat(records, vocab, seed=42)
    print(f"\nrandom concatenation: {len(random_samples)} samples "
          f"({len(random_rejected)} over the token cap)")
    print(f"  labels: {Counter(s.label.name for s in random_samples)}")
    print(f"  longest: {max(s.n_tokens for s in random_samples)} tokens")

    sequential_samples, rejected = build_sequential_concat(records, MockBackend(), vocab, seed=42)
    gate_rejects = [r for r in rejected if r.reason == "nsp_gate"]
    print(f"\nsequential concatenation: {len(sequential_samples)} samples, "
          f"{len(gate_rejects)} runs failed the gate")
    fail_positions = Counter(r.failed_pair_index for r in gate_rejects)
    print(f"  first failing pair index distribution: {dict(sorted(fail_positions.items()))}")

    random_parts = {tuple(s.part_ids) for s in random_samples}
    assert all(tuple(s.part_ids) in random_parts for s in sequential_samples)
    print("\nevery sequential sample also appears in the random build (gate only removes)")

    sample = max(sequential_samples, key=lambda s: len(s.part_ids))
    print(f"\nwidest surviving run ({len(sample.part_ids)} parts, {sample.n_tokens} tokens, "
          f"{sample.label.name}):")
    print(f"  {sample.text[:200]}...")


if __name__ == "__main__":
    main()
