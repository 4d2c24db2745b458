"""Exact desk-scale algebra of proximities, flat Specker algebras and normal step functions."""

__version__ = "0.1.0"
