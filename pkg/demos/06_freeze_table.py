"""Trainable-parameter accounting under progressive layer freezing.

Freezing everything up to and including layer k removes the embedding block
and k encoder layers from the trainable set; freezing all twelve layers
leaves only the pooler and the classification head (about 0.6M parameters of
the ~110M total).
"""

from finsent.freezing import (
    BASE_CONFIG,
    FineTuneConfig,
    freeze_table_text,
    total_parameters,
    trainable_after_freeze,
)


def main():
    print(f"base encoder-classifier total: {total_parameters(BASE_CONFIG):,} parameters\n")
    print(freeze_table_text(BASE_CONFIG))

    head_only = trainable_after_freeze(BASE_CONFIG, "layer_12")
    fraction = head_only.trainable_count / head_only.total_count
    print(f"head-only fine-tuning trains {fraction:.2%} of the model")

    config = FineTuneConfig(epochs=4, seed=42)
    print("\nfine-tune configuration consumed by the training harness:")
    print(config.to_json())


if __name__ == "__main__":
    main()
