"""Perfect filtered complexes: split objects, complexes over R[β], homs and equivalences."""

from fper.homotopy.objects import (
    ZERO, ChainMap, ConeData, FiltComplex, GradedMatrix, Homotopy, SplitObject, SumLayout,
    beta_map, chain_map, complex_from, cone, cone_beta, cone_data, direct_sum, direct_sum_layout,
    direct_sum_maps, dual, elementary, embed_degree_zero, evaluation, free, gr_complex, gr_total,
    identity, layout, pi_complex, place, shift, shift_map, tensor, tensor_residue, twist, twist_map,
    unit, validate, zero_map,
)
from fper.homotopy.homs import (
    CentralRingSlice, Equivalence, HomComplex, LocalizedHom, are_homotopy_equivalent,
    chain_maps_mod_homotopy, cycles_basis, enumerate_chain_maps, graded_central_ring, hom_complex,
    homotopy_hom, homotopy_hom_rank, inverse_from_contraction, is_homotopic, is_nullhomotopic,
    is_zero_object, localized_hom,
)
from fper.homotopy.field import (
    Decomposition, Reduction, Summand, cancel, decompose_field, invariant_signature, is_minimal,
    minimize, reduce_units,
)
