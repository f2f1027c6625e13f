"""Scheme-level first-order logic: schemes, proofs, models and certificates."""

__version__ = "0.1.0"
