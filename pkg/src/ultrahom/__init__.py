"""Exact desk-scale constructions for countable ultrahomogeneous tournaments and digraphs."""

__version__ = "0.1.0"
