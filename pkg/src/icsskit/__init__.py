"""Exact-integer image-computing spectral sequence engine."""
__version__ = "0.1.0"
