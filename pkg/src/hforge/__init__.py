"""Heisenberg groups of bilinear forms over finite abelian groups."""
__version__ = "0.1.0"
