"""Finite-truncation numerics for weighted Besov spaces on the unit ball,
complete Pick kernels, row and column multipliers, weak products and
Hankel forms."""

__version__ = "0.1.0"

from .polyring import Polynomial, format_polynomial, radial_derivative
from .textio import ParseError, parse_polynomial
from .spaces import RadialWeight, SpaceSpec, inner_product, monomial_norm, space_norm
from .kernels import KernelSpec, PointSet, complete_pick_gram, gram, min_eigenvalue, random_points
from .multops import MultiplierTuple, column_norm, mult_matrix, row_norm
from .weakprod import Factorization, HankelForm, SmirnovWitness, hankel_build, smirnov_verify, square_split

__all__ = [
    "Factorization",
    "HankelForm",
    "KernelSpec",
    "MultiplierTuple",
    "ParseError",
    "PointSet",
    "Polynomial",
    "RadialWeight",
    "SmirnovWitness",
    "SpaceSpec",
    "column_norm",
    "complete_pick_gram",
    "format_polynomial",
    "gram",
    "hankel_build",
    "inner_product",
    "min_eigenvalue",
    "monomial_norm",
    "mult_matrix",
    "parse_polynomial",
    "radial_derivative",
    "random_points",
    "row_norm",
    "smirnov_verify",
    "space_norm",
    "square_split",
]
