"""Numerical laboratory for fractional Hardy-Lieb-Thirring inequalities."""

from .constants import FracParams, hardy_constant, kernel_normalization, phi_function
from .quadrature import QuadratureSpec

__version__ = "0.1.0"

__all__ = ["FracParams", "QuadratureSpec", "hardy_constant", "kernel_normalization", "phi_function"]
