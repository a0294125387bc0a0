"""Densely valued lattice-ordered groups: models, syntax, and decision
procedures."""

__version__ = "0.1.0"
