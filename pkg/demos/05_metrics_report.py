"""Metric suite walkthrough on the published confusion matrices.

Feeds the reported sentiment and NSP confusion matrices through the metric
stack (accuracy, per-class precision/recall/F1, both macro-F1 variants) and
demonstrates the misclassification listing on a small prediction set.
"""

from finsent.metrics import (
    MACRO_F1_HARMONIC,
    accuracy,
    list_misclassified,
    macro_f1,
    matrix_from_rows,
    per_class_metrics,
)

SENTIMENT = ("negative", "neutral", "positive")

MATRICES = {
    "sentiment, 50% agreement": ([[53, 5, 2], [7, 263, 18], [0, 23, 114]], SENTIMENT),
    "sentiment, 100% agreement": ([[27, 1, 2], [0, 138, 1], [1, 1, 55]], SENTIMENT),
    "NSP, 5000-pair test": ([[2277, 223], [233, 2267]], ("notNext", "isNext")),
}


def main():
    for title, (rows, classes) in MATRICES.items():
        cm = matrix_from_rows(rows, classes)
        print(f"{title}: n={cm.total}")
        print(f"  accuracy          {accuracy(cm):.4f}")
        print(f"  macro F1 (mean)   {macro_f1(cm):.4f}")
        print(f"  macro F1 (harm.)  {macro_f1(cm, MACRO_F1_HARMONIC):.4f}")
        for name, m in per_class_metrics(cm).items():
            print(f"    {name:<9} precision={m.precision:.4f} recall={m.recall:.4f} f1={m.f1:.4f}")
        print()

    texts = [
        "Rosen was cautious about being too optimistic in regard to the second half .",
        "The acquisition is part of the strategy to expand the security chain .",
        "Operating profit improved clearly from the previous year .",
    ]
    actual = ["neutral", "neutral", "positive"]
    predicted = ["negative", "positive", "positive"]
    print("neutral sentences predicted as positive:")
    for text in list_misclassified(texts, actual, predicted, "neutral", "positive"):
        print(f"  - {text}")


if __name__ == "__main__":
    main()
