"""Exact representation workbench for unit groups of local division algebras."""

__version__ = "0.1.0"
