"""Exact invariants of manifolds with local quaternionic torus actions."""
__version__ = "0.1.0"
