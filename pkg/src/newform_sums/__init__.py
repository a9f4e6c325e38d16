"""Computational checks on sums a_f(p) + a_g(p) of newform coefficients."""

__version__ = "0.1.0"
