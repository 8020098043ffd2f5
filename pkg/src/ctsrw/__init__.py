"""Continuous-time random walks on weighted graphs and multi-person meeting times."""

__version__ = "0.1.0"
