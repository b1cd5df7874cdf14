"""Random automata and brute-force reference values shared by the tests."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from sharpfa.automaton import WeightedAutomaton, count_paths_bruteforce, words

AB = ("a", "b")


def random_automaton(rng: random.Random, n_states: int, alphabet=AB, max_weight: int = 1,
                     density: float = 0.5) -> WeightedAutomaton:
    states = tuple(f"q{i}" for i in range(n_states))

    def w():
        return rng.randint(1, max_weight) if rng.random() < density else 0

    trans = {(p, a, q): w() for p in states for a in alphabet for q in states}
    init = {q: w() for q in states}
    out = {q: w() for q in states}
    return WeightedAutomaton(states, tuple(alphabet), trans, init, out)


@st.composite
def automata(draw, max_states: int = 3, alphabet=AB, max_weight: int = 1):
    n = draw(st.integers(1, max_states))
    states = tuple(f"q{i}" for i in range(n))
    weight = st.integers(0, max_weight)
    trans = {(p, a, q): draw(weight) for p in states for a in alphabet for q in states}
    init = {q: draw(weight) for q in states}
    out = {q: draw(weight) for q in states}
    return WeightedAutomaton(states, tuple(alphabet), trans, init, out)


def oracle_table(M: WeightedAutomaton, max_len: int) -> dict[tuple, int]:
    """``w -> f(w)`` by path enumeration for every word up to ``max_len``."""
    return {w: count_paths_bruteforce(M, w) for w in words(M.alphabet, max_len)}


def matches(M: WeightedAutomaton, expected: dict[tuple, int]) -> tuple | None:
    """First word where ``M`` disagrees with ``expected``, or ``None``."""
    for w, v in expected.items():
        if M(w) != v:
            return w, M(w), v
    return None
