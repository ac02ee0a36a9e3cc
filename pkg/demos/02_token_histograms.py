"""Token-length histograms of the base corpus and a concatenated build.

Mirrors the two distribution figures: the short-sentence corpus tops out
near 82 WordPiece tokens, while NSP-gated concatenation pushes lengths toward
the 512-token context window without ever crossing it.
"""

from pathlib import Path

from finsent.concat import build_sequential_concat, concat_samples_to_records
from finsent.corpus import parse_phrasebank
from finsent.scoring import MockBackend
from finsent.wordpiece import histogram_csv, length_histogram, load_vocab

DATA = Path(__file__).resolve().parent.parent / "data"
OUT = Path(__file__).resolve().parent / "out"


def ascii_plot(report, width=50):
    top = max(report.bin_counts) or 1
    for i, count in enumerate(report.bin_counts):
        bar = "#" * round(width * count / top)
        print(f"  [{report.bin_edges[i]:>3},{report.bin_edges[i + 1]:>3}) {count:>5} {bar}")


def main():
    OUT.mkdir(exist_ok=True)
    vocab = load_vocab((DATA / "vocab.txt").read_bytes())
    records = parse_phrasebank((DATA / "Sentences_50Agree.txt").read_bytes())

    base = length_histogram(records, vocab, bin_width=10)
    print(f"Base corpus: n={base.n_records} min={base.min_tokens} "
          f"max={base.max_tokens} mean={base.mean_tokens:.1f}")
    ascii_plot(base)
    (OUT / "hist_base.csv").write_text(histogram_csv(base))

    samples, rejected = build_sequential_concat(records, MockBackend(), vocab, seed=42)
    concatenated = concat_samples_to_records(samples)
    longer = length_histogram(concatenated, vocab, bin_width=20)
    print(f"\nConcatenated ({len(samples)} samples, {len(rejected)} runs rejected): "
          f"min={longer.min_tokens} max={longer.max_tokens} mean={longer.mean_tokens:.1f}")
    ascii_plot(longer)
    (OUT / "hist_concat.csv").write_text(histogram_csv(longer))
    print(f"\nCSV histograms written to {OUT}/")


if __name__ == "__main__":
    main()
