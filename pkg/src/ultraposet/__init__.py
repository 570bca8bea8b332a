"""Finite posets, completely additive operations, reduced products and complex algebras."""
from .campaign import CampaignConfig, CampaignReport, run_campaign
from .complex import BAO, atom_structure, complex_algebra, givant_check, is_normal
from .errors import UltraposetError
from .fileformat import format_structure, load_structure, parse_structure, save_structure
from .gen import (
    downset_lattice, enumerate_posets, gen_additive_op, gen_downset_lattice, gen_monotone_op,
    gen_poset, gen_quasi_op,
)
from .iso import is_isomorphism, iso_search
from .order import (
    OperationTable, Poset, check_lemma_equivalence, dm_completion, inf, is_complete_lattice,
    is_completely_additive, is_monotone, is_quasi_complete, sup, unary_instance, validate_poset,
)
from .product import (
    Family, direct_product, los_check, make_filter, reduced_product, theorem1_check, ultraproduct,
)
from .structure import Structure

__all__ = [
    "BAO", "CampaignConfig", "CampaignReport", "Family", "OperationTable", "Poset", "Structure",
    "UltraposetError", "atom_structure", "check_lemma_equivalence", "complex_algebra",
    "direct_product", "dm_completion", "downset_lattice", "enumerate_posets", "format_structure",
    "gen_additive_op", "gen_downset_lattice", "gen_monotone_op", "gen_poset", "gen_quasi_op",
    "givant_check", "inf", "is_complete_lattice", "is_completely_additive", "is_isomorphism",
    "is_monotone", "is_normal", "is_quasi_complete", "iso_search", "load_structure", "los_check",
    "make_filter", "parse_structure", "reduced_product", "run_campaign", "save_structure", "sup",
    "theorem1_check", "ultraproduct", "unary_instance", "validate_poset",
]
