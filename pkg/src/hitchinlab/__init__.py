"""Exact and numerical workbench for Garnier, Calogero-Moser and Gaudin systems."""

__version__ = "0.1.0"
