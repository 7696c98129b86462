"""
Core algebra: finite abelian groups, finite rings, epimorphism tests,
spectra, polynomials, fractions and Gabriel filters
"""

from .abelian import FpGroup, Subgroup, quotient_presentation, smith_normal_form, subgroup_closure, tensor_over_z
from .errors import EpilabError, CapExceededError, ConditionDisagreementError, WitnessError
from .limits import ComputeLimits, DEFAULT_LIMITS
from .rings import (
    FiniteRing,
    FiniteModule,
    Ideal,
    RingMap,
    annihilator,
    colon_ideal,
    ideal_from,
    is_faithful,
    is_regular,
    make_map,
    make_ring,
    module_colon,
    poly_quotient,
    product,
    quotient,
    zmod,
)
from .epi import (
    KaehlerModule,
    TensorSquare,
    Verdict,
    check_module_condition,
    is_epi_coker,
    is_epi_mult,
    is_epi_tensor,
    is_epimorphism,
    is_symmetric_square,
    kaehler,
    tensor_square,
    verify_faithfully_flat_epi_iso,
)
from .spectrum import (
    LocalDecomposition,
    PrimePoint,
    check_geo_v,
    check_local_iso,
    check_prop2,
    decompose,
    is_flat_module,
    primes,
    spec_map,
)
from .poly import Poly, constant_term_contraction, eval_kernel_rewrite, mccoy_annihilator, parse_poly, regular_element
from .total_quotient import Frac, construct_denominator, embed
from .gabriel import GabrielFilter, classify_flat_epis, filter_of, filters_equal, verify_axioms

__all__ = [
    "FpGroup", "Subgroup", "quotient_presentation", "smith_normal_form", "subgroup_closure", "tensor_over_z",
    "EpilabError", "CapExceededError", "ConditionDisagreementError", "WitnessError",
    "ComputeLimits", "DEFAULT_LIMITS",
    "FiniteRing", "FiniteModule", "Ideal", "RingMap",
    "annihilator", "colon_ideal", "ideal_from", "is_faithful", "is_regular",
    "make_map", "make_ring", "module_colon", "poly_quotient", "product", "quotient", "zmod",
    "KaehlerModule", "TensorSquare", "Verdict",
    "check_module_condition", "is_epi_coker", "is_epi_mult", "is_epi_tensor", "is_epimorphism",
    "is_symmetric_square", "kaehler", "tensor_square", "verify_faithfully_flat_epi_iso",
    "LocalDecomposition", "PrimePoint",
    "check_geo_v", "check_local_iso", "check_prop2", "decompose", "is_flat_module", "primes", "spec_map",
    "Poly", "constant_term_contraction", "eval_kernel_rewrite", "mccoy_annihilator", "parse_poly",
    "regular_element",
    "Frac", "construct_denominator", "embed",
    "GabrielFilter", "classify_flat_epis", "filter_of", "filters_equal", "verify_axioms",
]
