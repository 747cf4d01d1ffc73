"""Exact construction and verification of exceptional Hahn and Jacobi polynomials."""

__version__ = "0.1.0"
