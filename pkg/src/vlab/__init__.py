"""Verified laboratory for uniform polynomial approximation on Veronese curves."""

__version__ = "0.1.0"
