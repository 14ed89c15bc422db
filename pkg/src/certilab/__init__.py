"""Toolkit for building, running and attacking proof-labeling schemes."""

__version__ = "0.1.0"
