"""Leggett-type nonlocal-realist bounds, singlet predictions and numerical checks."""

__version__ = "0.1.0"
