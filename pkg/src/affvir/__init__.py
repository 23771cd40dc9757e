"""Exact computer algebra for weight modules over the affine-Virasoro algebra."""

__version__ = "0.1.0"
