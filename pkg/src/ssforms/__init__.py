"""Supersingular curves over F_p and binary quadratic forms."""

__version__ = "0.1.0"
