"""Isotopisms and isomorphisms of evolution algebras over prime fields.

Exact arithmetic over GF(p) and Q, sparse polynomials with a Buchberger
engine, the ideals whose zeros are the isotopisms between two algebras,
pruned searches that decide isotopy and isomorphism, and the classification
of three-dimensional evolution algebras.
"""

from .algebra import (
    AlgebraError,
    AlgebraSyntaxError,
    EvolutionAlgebra,
    family,
    format_algebra,
    parse_algebra,
    parse_family,
    representative,
    verify_isomorphism,
    verify_isotopism,
    verify_strong_isotopism,
)
from .classify import ClassificationReport, classify_all, genetic_pattern, isotopism_class_of
from .e32 import derive_E32_iso_conditions, isomorphism_canonical_E32
from .field import QQ, gf, parse_field
from .groebner import buchberger, groebner_basis, is_groebner_basis, normal_form, s_polynomial
from .isotopy import (
    BudgetExhausted,
    SearchBudget,
    brute_force_isotopism_oracle,
    build_isomorphism_ideal,
    build_isotopism_ideal,
    find_isomorphism,
    find_isotopism,
    find_strong_isotopism,
    variety_nonsingular_solutions,
)
from .linalg import Matrix
from .poly import Ideal, MonomialOrder, Polynomial, parse_polynomial, parse_polynomials

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "AlgebraError",
    "AlgebraSyntaxError",
    "BudgetExhausted",
    "ClassificationReport",
    "EvolutionAlgebra",
    "Ideal",
    "Matrix",
    "MonomialOrder",
    "Polynomial",
    "SearchBudget",
    "brute_force_isotopism_oracle",
    "buchberger",
    "build_isomorphism_ideal",
    "build_isotopism_ideal",
    "classify_all",
    "derive_E32_iso_conditions",
    "family",
    "find_isomorphism",
    "find_isotopism",
    "find_strong_isotopism",
    "format_algebra",
    "genetic_pattern",
    "gf",
    "groebner_basis",
    "is_groebner_basis",
    "isomorphism_canonical_E32",
    "isotopism_class_of",
    "normal_form",
    "parse_algebra",
    "parse_family",
    "parse_field",
    "parse_polynomial",
    "parse_polynomials",
    "representative",
    "s_polynomial",
    "variety_nonsingular_solutions",
    "verify_isomorphism",
    "verify_isotopism",
    "verify_strong_isotopism",
]
