"""Symbolic verification of conformal and Lie/Noether symmetries on Riemannian charts."""

__version__ = "0.1.0"
