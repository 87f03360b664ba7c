"""Exact verification toolkit for the canonical projective embeddings and
Segre families of the six families of irreducible compact Hermitian
symmetric spaces."""

__version__ = "0.1.0"
