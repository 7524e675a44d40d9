"""Degree-bounded SSM-Thom polynomials of contact singularities by interpolation."""

__version__ = "0.1.0"
