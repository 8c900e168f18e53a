"""Anchored-comment discussion boards with patina overlay rendering."""

__version__ = "0.1.0"
