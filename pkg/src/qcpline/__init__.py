"""Exact and numerical verification tools for a nonstandard quantum CP^1."""

from .laurent import LaurentPoly
from .ncwords import NCElement, NormalWord, nc_normalize, symbolic_suite
from .qcp import TruncationContext, decompose, eigen_sequence, measure_decomposition

__all__ = [
    "LaurentPoly",
    "NCElement",
    "NormalWord",
    "TruncationContext",
    "decompose",
    "eigen_sequence",
    "measure_decomposition",
    "nc_normalize",
    "symbolic_suite",
]

__version__ = "0.1.0"
