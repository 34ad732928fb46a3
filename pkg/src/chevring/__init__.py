"""Chevalley groups over finite local rings and the finite point sets built from them."""

from .budget import BudgetExceeded
from .decomp import bruhat_decompose, iwahori_decompose, rank1_commutator, residue_bruhat_cell
from .group import GroupDescriptor, GroupElem, build_group, demo_ring
from .ring import RingDescriptor, RingElem, extend, make_ring, truncate
from .rootdata import RootDatum, make_root_datum
from .torus import Character, Torus, characters, is_regular, make_torus, regular_characters
from .variety import inner_product_rhs, irreducibility_predicate, sigma_points

__all__ = [
    "BudgetExceeded", "Character", "GroupDescriptor", "GroupElem", "RingDescriptor", "RingElem",
    "RootDatum", "Torus", "bruhat_decompose", "build_group", "characters", "demo_ring", "extend",
    "inner_product_rhs", "irreducibility_predicate", "is_regular", "iwahori_decompose",
    "make_ring", "make_root_datum", "make_torus", "rank1_commutator", "regular_characters",
    "residue_bruhat_cell", "sigma_points", "truncate",
]
