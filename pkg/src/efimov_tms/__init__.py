"""Reduced spectral toolkit for three identical bosons with contact interactions at unitarity."""
from .config import QuadratureConfig, GridError, DEFAULT
from .specfun import (SpectralCurve, Variant, RootResult, KernelKind, eval_gamma,
                      find_s0, get_s0, eval_S, kernel_pair, kernel_x)

__version__ = "0.1.0"
