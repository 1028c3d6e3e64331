"""Exact structure classification of bivariate polynomials and GF(p) expansion experiments."""

from .classify import StructureReport, classify, decompose_composite, decompose_univariate, determinant_criterion
from .errors import BudgetExceeded, ExpanderLabError, ValidationError
from .field import FieldElem, PrimeField
from .kernels import BACKEND
from .parser import parse_poly
from .poly import RatFunc, RatPoly

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BudgetExceeded",
    "ExpanderLabError",
    "FieldElem",
    "PrimeField",
    "RatFunc",
    "RatPoly",
    "StructureReport",
    "ValidationError",
    "classify",
    "decompose_composite",
    "decompose_univariate",
    "determinant_criterion",
    "parse_poly",
]
