"""Exact enumeration workbench for the Ashkin-Teller model."""

__version__ = "0.1.0"
