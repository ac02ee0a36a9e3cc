"""Label distribution across the four agreement-level phrasebank files.

Loads each file, prints a distribution table (percent negative / neutral /
positive plus record count), and shows that stricter agreement shrinks the
corpus monotonically.
"""

from pathlib import Path

from finsent.corpus import label_distribution, parse_phrasebank

DATA = Path(__file__).resolve().parent.parent / "data"

FILES = [
    ("100% agreement", "Sentences_AllAgree.txt"),
    ("75% agreement", "Sentences_75Agree.txt"),
    ("66% agreement", "Sentences_66Agree.txt"),
    ("50% agreement", "Sentences_50Agree.txt"),
]


def main():
    print(f"{'Subset':<16} {'% Negative':>10} {'% Neutral':>10} {'% Positive':>10} {'Count':>7}")
    previous = 0
    for title, name in FILES:
        records = parse_phrasebank((DATA / name).read_bytes())
        stats = label_distribution(records)
        print(f"{title:<16} {stats.pct_negative:>10.1f} {stats.pct_neutral:>10.1f} "
              f"{stats.pct_positive:>10.1f} {stats.count:>7}")
        assert stats.count >= previous
        previous = stats.count
    print("\nHigher agreement thresholds keep fewer sentences, as expected.")


if __name__ == "__main__":
    main()
