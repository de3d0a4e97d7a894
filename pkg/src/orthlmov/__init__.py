"""Exact orthogonal LMOV computations: free energies, BPS tables, product formulas."""

__version__ = "0.1.0"
