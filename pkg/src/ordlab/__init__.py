"""Small-scale computational model theory: ordinals, EF games, formula
languages, Boolean algebras with ideals, and preorder experiments."""

from .ordinal_cnf import (Ordinal, parse_ordinal, compare, add, mul,
                          decompose_mod_omega_omega, congruent_mod_omega_omega,
                          elementarily_equivalent)
from .structures import FiniteStructure, linear_order, powerset_algebra, two_sorted
from .ef_engine import is_partial_embedding, who_wins, ef_rank_distinguishing, step_game

__version__ = "0.1.0"

__all__ = [
    "Ordinal", "parse_ordinal", "compare", "add", "mul", "decompose_mod_omega_omega",
    "congruent_mod_omega_omega", "elementarily_equivalent", "FiniteStructure",
    "linear_order", "powerset_algebra", "two_sorted", "is_partial_embedding",
    "who_wins", "ef_rank_distinguishing", "step_game",
]
