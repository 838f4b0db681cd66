"""Lie-theoretic verification toolkit for invariant phi-Poisson structures on M_{l alpha}."""

__version__ = "0.1.0"
