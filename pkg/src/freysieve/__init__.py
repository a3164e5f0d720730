"""Sieve toolkit for the Fermat-type equation x^13 + y^13 = 3z^7."""

__version__ = "0.1.0"
