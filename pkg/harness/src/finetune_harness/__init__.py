"""Fine-tuning and serving harness for finsent datasets and the scoring wire protocol."""

__version__ = "0.1.0"
