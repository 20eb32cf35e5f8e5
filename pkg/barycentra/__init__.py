"""Exact barycentric algebras over ℚ and affine spaces over GF(p)."""

__version__ = "0.1.0"
