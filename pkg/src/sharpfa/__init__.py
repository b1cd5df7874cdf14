"""Closure-property constructions for natural-number weighted finite automata."""
from __future__ import annotations

from .automaton import (
    WeightedAutomaton, binary_value, constant, count_paths_bruteforce, evaluate, letter_counter,
    simplify, to_matrix_form, unary_counter, unary_doubler,
)
from .errors import ContractError, InputError, Limits, ResourceLimitError, using_limits

__all__ = [
    "WeightedAutomaton", "binary_value", "constant", "count_paths_bruteforce", "evaluate",
    "letter_counter", "simplify", "to_matrix_form", "unary_counter", "unary_doubler",
    "ContractError", "InputError", "Limits", "ResourceLimitError", "using_limits",
]
