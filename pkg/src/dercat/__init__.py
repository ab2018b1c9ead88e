"""Exact computations in bounded derived categories of vector-space-valued
presheaves over finite directed categories."""

__version__ = "0.1.0"
