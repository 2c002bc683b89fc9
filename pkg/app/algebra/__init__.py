"""Exact algebra over Z[X, X^-1]-modules and the groups A x| Z built on them"""

from .laurent import LaurentPoly, LaurentVec, format_laurent, parse_laurent
from .zlinalg import IntMatrix, hermite_normal_form, integer_kernel, solve_affine
from .groebner import StrongGB, TermOrder, strong_groebner, syzygy_basis, constant_intersection
from .fpmod import (
    ModulePresentation,
    canonical_form,
    elem_equal,
    integer_syzygies,
    named_presentation,
    restrict_scalars,
    submodule_membership,
    syzygies_in_quotient,
)
from .monomial_eq import MonomialSolveResult, SolveConfig, Verdict, solve_monomial
from .abc_group import (
    GroupElement,
    SubgroupStructure,
    Word,
    evaluate_word,
    parse_group_element,
    parse_word,
    subgroup_membership,
    subgroup_structure,
)
from .coset_intersection import CosetResult, CosetVerdict, coset_intersect
from .gadgets import DivisibilitySystem, EquationChain, compile_system, evaluate_system, flatten_polynomial

__all__ = [
    # Laurent arithmetic
    "LaurentPoly", "LaurentVec", "format_laurent", "parse_laurent",

    # Integer linear algebra
    "IntMatrix", "hermite_normal_form", "integer_kernel", "solve_affine",

    # Groebner engine
    "StrongGB", "TermOrder", "strong_groebner", "syzygy_basis", "constant_intersection",

    # Module presentations
    "ModulePresentation", "canonical_form", "elem_equal", "integer_syzygies",
    "named_presentation", "restrict_scalars", "submodule_membership", "syzygies_in_quotient",

    # Monomial equations
    "MonomialSolveResult", "SolveConfig", "Verdict", "solve_monomial",

    # Groups
    "GroupElement", "SubgroupStructure", "Word", "evaluate_word", "parse_group_element", "parse_word",
    "subgroup_membership", "subgroup_structure",

    # Coset intersection
    "CosetResult", "CosetVerdict", "coset_intersect",

    # Gadgets
    "DivisibilitySystem", "EquationChain", "compile_system", "evaluate_system", "flatten_polynomial",
]
