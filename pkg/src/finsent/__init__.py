"""finsent: corpus engineering and evaluation toolkit for financial sentiment analysis."""

__version__ = "0.1.0"
