"""Exact Ollivier-Ricci curvature on gluing graphs of complete graphs."""

__all__ = ["__version__"]

__version__ = "0.1.0"
