"""Exact p-adic convergence, limits and loci of periodic continued fractions."""

from .cfcore import PCF, Mat2, QuadPoly, cf_matrix, continuants, convergent_at, e_matrix, in_variety, quad_of
from .convergence import is_convergent, limit, oracle_converges
from .exact import INFINITY, PAdicApprox, ProjPoint, vp

__all__ = [
    "INFINITY",
    "Mat2",
    "PAdicApprox",
    "PCF",
    "ProjPoint",
    "QuadPoly",
    "cf_matrix",
    "continuants",
    "convergent_at",
    "e_matrix",
    "in_variety",
    "is_convergent",
    "limit",
    "oracle_converges",
    "quad_of",
    "vp",
]
