"""Command-line package for discrete spline fitting; no side effects here."""

__all__ = []
