"""Lattice-theoretic invariants of maximizing plane sextics."""

__version__ = "0.1.0"
