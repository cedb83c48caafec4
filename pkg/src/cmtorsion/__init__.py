"""Least degrees of CM points on X_1(N) and the surrounding arithmetic."""

__version__ = "0.1.0"
