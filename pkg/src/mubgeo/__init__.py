"""Mutually unbiased bases in prime-power dimension and the finite geometry around them."""

from .affine import AffinePlane, plane_from_field, plane_from_mols, plane_to_mols, verify_axioms
from .gf import FieldTable, field_create, field_of_order
from .latin import LatinSquare, MolsSet, are_orthogonal, find_orthogonal_mate, is_latin, mols_from_field
from .mub import MubSet, mub_construct, mub_verify, mubs_for_dimension
from .polytope import (
    DSimplex,
    Polytope,
    inscribe_dsimplex,
    point_face_operator,
    polytope_abstract,
    polytope_from_mubs,
    sic_candidate,
    sic_search,
)
from .wigner import WignerTable, line_probabilities, state_from_wigner, wigner_from_state

__version__ = "0.1.0"

__all__ = [
    "AffinePlane",
    "DSimplex",
    "FieldTable",
    "LatinSquare",
    "MolsSet",
    "MubSet",
    "Polytope",
    "WignerTable",
    "are_orthogonal",
    "field_create",
    "field_of_order",
    "find_orthogonal_mate",
    "inscribe_dsimplex",
    "is_latin",
    "line_probabilities",
    "mols_from_field",
    "mub_construct",
    "mub_verify",
    "mubs_for_dimension",
    "plane_from_field",
    "plane_from_mols",
    "plane_to_mols",
    "point_face_operator",
    "polytope_abstract",
    "polytope_from_mubs",
    "sic_candidate",
    "sic_search",
    "state_from_wigner",
    "verify_axioms",
    "wigner_from_state",
]
