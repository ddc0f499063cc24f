"""Exact computations with equivariant bilinear maps between Witt algebra modules."""

from .classify import ClassificationVerdict, bbar_dim, degenerate_dim, full_classification, primitivity_check
from .equivariance import UnstableDimension, check_bilinear, solve_bilinear_space
from .exact import MultiPoly, Rational
from .germ import determinant_bundle, recurrence_germ_oracle, theorem2_dim
from .modules import ModuleSpec, abar_c, mod_a, mod_b, omega, parse_module, restricted_dual
from .operators import parse_expr

__all__ = [
    "ClassificationVerdict", "MultiPoly", "ModuleSpec", "Rational", "UnstableDimension",
    "abar_c", "bbar_dim", "check_bilinear", "degenerate_dim", "determinant_bundle",
    "full_classification", "mod_a", "mod_b", "omega", "parse_expr", "parse_module",
    "primitivity_check", "recurrence_germ_oracle", "restricted_dual", "solve_bilinear_space",
    "theorem2_dim",
]
