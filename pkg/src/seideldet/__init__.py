"""Determinants, Pfaffians and characteristic polynomials of tournament Seidel matrices."""

from .core import GraphSeidel, SeidelMatrix, Tournament, reverse_arc, switch, switch_normalize
from .exactlinalg import IntPolynomial, char_poly, determinant, inverse, pfaffian

__all__ = [
    "GraphSeidel",
    "IntPolynomial",
    "SeidelMatrix",
    "Tournament",
    "char_poly",
    "determinant",
    "inverse",
    "pfaffian",
    "reverse_arc",
    "switch",
    "switch_normalize",
]
__version__ = "0.1.0"
