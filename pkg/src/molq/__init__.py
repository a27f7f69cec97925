"""molq - exact-arithmetic workbench for modular ortholattices of subspaces."""

__version__ = "0.1.0"
