"""Finite rings as operation tables: zero-divisor structure and bound verification."""

__version__ = "0.1.0"
