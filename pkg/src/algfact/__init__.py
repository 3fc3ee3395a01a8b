"""Exact computations for algebra factorisations ``X(B, A) = B (x) A``:
twisting maps, the double cochain complex, cohomology by exact elimination,
and order-by-order formal deformations."""

from .algebra import BasedAlgebra, family_commutative_poly, family_q_plane, family_table
from .cohomology import assemble_D, cohomology_dim, normalize_representative, solve_coboundary
from .complex import Cochain, CochainComplex, TotalCochain
from .deformation import (
    DeformationData,
    GaugePair,
    Inconclusive,
    NonRemovable,
    NotTrivial,
    check_order,
    extend_order,
    first_order_triviality,
    gauge_transform,
    infinitesimal_cocycle_check,
    obstruction,
    obstruction_is_cocycle,
)
from .scalar import QRational, Rational, TSeries
from .twist import TwistMap, check_axioms, extend_from_generators

__version__ = "0.1.0"

__all__ = [
    "BasedAlgebra",
    "Cochain",
    "CochainComplex",
    "DeformationData",
    "GaugePair",
    "Inconclusive",
    "NonRemovable",
    "NotTrivial",
    "QRational",
    "Rational",
    "TSeries",
    "TotalCochain",
    "TwistMap",
    "assemble_D",
    "check_axioms",
    "check_order",
    "cohomology_dim",
    "extend_from_generators",
    "extend_order",
    "family_commutative_poly",
    "family_q_plane",
    "family_table",
    "first_order_triviality",
    "gauge_transform",
    "infinitesimal_cocycle_check",
    "normalize_representative",
    "obstruction",
    "obstruction_is_cocycle",
    "solve_coboundary",
]
