"""Exact computation of SSM-Thom polynomials of multisingularities."""

__version__ = "0.1.0"
