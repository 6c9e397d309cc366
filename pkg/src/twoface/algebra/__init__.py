"""Exact arithmetic used throughout the solver."""

from .extract import (
    character_sum,
    extract_coeffs_mod2,
    extract_coeffs_mod2k,
    field_evaluator,
    ring_evaluator,
)
from .fields import GF2m, GaloisRing, find_irreducible, is_irreducible, poly_str
from .poly import BiPoly, PolyContext, UniPoly

__all__ = [
    "BiPoly", "PolyContext", "UniPoly",
    "GF2m", "GaloisRing", "find_irreducible", "is_irreducible", "poly_str",
    "extract_coeffs_mod2", "extract_coeffs_mod2k", "field_evaluator", "ring_evaluator",
    "character_sum",
]
