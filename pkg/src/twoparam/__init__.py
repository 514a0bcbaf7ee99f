"""Numerical and exact checks for two-parameter (A)dS4 dynamics."""

__version__ = "0.1.0"
