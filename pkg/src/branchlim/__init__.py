"""Limits of one-parameter families of branchvarieties and their labeled forests."""

__version__ = "0.1.0"

from .algebra import PresentedAlgebra, disjoint_union
from .decompose import (
    Decomposition,
    DegreeSequence,
    connected_components,
    degree_sequence,
    equidimensional_parts,
    is_reduced,
    minimal_primes,
    multiplicity_of_component,
)
from .exact_arith import UniPoly, factor_rational, squarefree_part
from .forest import (
    Forest,
    compute_forest,
    forest_degree_sequence,
    forest_hilbert_polynomial,
    kollar_double,
    stanley_reisner_from_forest,
    validate_forest_labels,
)
from .groebner import (
    Ideal,
    eliminate,
    groebner_basis,
    ideal_equal,
    ideal_quotient,
    normal_form,
    saturate,
)
from .hilbert import HilbertData, hilbert_polynomial_of_fiber, hilbert_series
from .limits import (
    FamilyOverDVR,
    LimitReport,
    balanced_normal_cone,
    base_change,
    branch_limit,
    further_base_change_stability,
    hilbert_limit,
    k_equivalence_check,
    make_family,
    normalize_along_t,
    samuel_order,
)
from .multipoly import Poly, PolyRing, RingMap, apply_map, compare_terms, parse_poly, poly_ring, to_text

__all__ = [
    "Decomposition",
    "DegreeSequence",
    "FamilyOverDVR",
    "Forest",
    "HilbertData",
    "Ideal",
    "LimitReport",
    "Poly",
    "PolyRing",
    "PresentedAlgebra",
    "RingMap",
    "UniPoly",
    "apply_map",
    "balanced_normal_cone",
    "base_change",
    "branch_limit",
    "compare_terms",
    "compute_forest",
    "connected_components",
    "degree_sequence",
    "disjoint_union",
    "eliminate",
    "equidimensional_parts",
    "factor_rational",
    "forest_degree_sequence",
    "forest_hilbert_polynomial",
    "further_base_change_stability",
    "groebner_basis",
    "hilbert_limit",
    "hilbert_polynomial_of_fiber",
    "hilbert_series",
    "ideal_equal",
    "ideal_quotient",
    "is_reduced",
    "k_equivalence_check",
    "kollar_double",
    "make_family",
    "minimal_primes",
    "multiplicity_of_component",
    "normal_form",
    "normalize_along_t",
    "parse_poly",
    "poly_ring",
    "samuel_order",
    "saturate",
    "squarefree_part",
    "stanley_reisner_from_forest",
    "to_text",
    "validate_forest_labels",
]
