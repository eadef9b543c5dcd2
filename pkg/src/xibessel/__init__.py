"""Numerical special functions and identity checks around the Riemann Xi function and Bessel lattice sums."""
__version__ = "0.1.0"
