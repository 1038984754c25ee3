"""Clique numbers of representation graphs of quadratic forms."""

__version__ = "0.1.0"
