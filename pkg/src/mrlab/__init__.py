"""Maximally recoverable tensor codes and higher-order MDS codes over finite fields."""

__version__ = "0.1.0"
