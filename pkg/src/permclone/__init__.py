"""Exact computations with reversible gates, their invariants and permutation clones."""

__version__ = "0.1.0"
