"""Exact and Monte Carlo tools for k-star decompositions of random regular graphs."""

__version__ = "0.1.0"
