"""Exact descent computations for morphisms of projective space."""

__version__ = "0.1.0"
