"""Tilting mutation workbench for weakly symmetric algebras."""

__version__ = "0.1.0"
