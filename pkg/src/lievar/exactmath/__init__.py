"""Exact arithmetic: finite fields, sparse polynomials, linear algebra mod p."""
from .field import CONWAY, GF, PRIMES, extension_degree_for, field, scalar_arith
from .linalg import Subspace, matrix_power, row_reduce, rref, subspace_query
from .poly import MultiPoly, poly_arith

__all__ = [
    "CONWAY",
    "GF",
    "PRIMES",
    "MultiPoly",
    "Subspace",
    "extension_degree_for",
    "field",
    "matrix_power",
    "poly_arith",
    "row_reduce",
    "rref",
    "scalar_arith",
    "subspace_query",
]
