"""Stepwise computation properties and the two product constructions over them.

A property ``(S, init, step, cond)`` is run along a computation
``q0 .. qn`` of a simple automaton: ``s0 = init(q0)``,
``s_i = step(q_{i-1}, w_i, q_i, s_{i-1})`` and the verdict is ``cond(s_n)``.
``S`` is never materialised; only the values reached from the automaton are
hashed and explored.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .automaton import WeightedAutomaton, all_computations, computation_weight, explore
from .errors import ContractError
from .semiring import FiniteSemiring

Vector = tuple  # sparse: sorted ((state index, nonzero semiring value), ...)


@dataclass(frozen=True, eq=False)
class StepwiseProperty:
    init: Callable[[Hashable], Hashable]
    step: Callable[[Hashable, str, Hashable, Hashable], Hashable]
    cond: Callable[[Hashable], int]
    name: str = "property"
    # Verdicts of lexicographic properties are only meaningful on computations
    # of nonzero weight, so they may not be used with count_satisfying.
    lexicographic: bool = False

    def run(self, word: Sequence[str], path: Sequence[Hashable]) -> int:
        """``prop(w, P)`` for the computation ``path`` on ``word``."""
        s = self.init(path[0])
        for a, p, q in zip(word, path, path[1:]):
            s = self.step(p, a, q, s)
        return self.cond(s)


def constant_property(value: int) -> StepwiseProperty:
    """``prop(w, P) = value`` for every computation."""
    return StepwiseProperty(lambda q: None, lambda q, a, r, s: None, lambda s: value, f"const:{value}")


def _require_simple(M: WeightedAutomaton) -> None:
    if not M.is_simple:
        raise ContractError("this construction needs a simple automaton; call simplify() first")


def weighted_filter(M: WeightedAutomaton, prop: StepwiseProperty) -> WeightedAutomaton:
    """Automaton for ``w -> sum_P weight(P) * prop(w, P)``.

    States are pairs ``(q, s)``; only pairs reachable along nonzero
    transitions are built.
    """
    _require_simple(M)
    succ = M.successors
    states = M.states

    def step(key):
        i, s = key
        q = states[i]
        for a in M.alphabet:
            for j, w in succ.get((i, a), ()):
                yield a, (j, prop.step(q, a, states[j], s)), w

    return explore(M.alphabet,
                   (((M.index[q], prop.init(q)), x) for q, x in M.init.items()),
                   step,
                   lambda key: M.out.get(states[key[0]], 0) * prop.cond(key[1]))


def count_satisfying(M: WeightedAutomaton, prop: StepwiseProperty) -> WeightedAutomaton:
    """Automaton for ``w -> #{P : prop(w, P) = 1}`` over all ``|Q|^(|w|+1)`` computations."""
    _require_simple(M)
    if prop.lexicographic:
        raise ContractError("lexicographic properties are unspecified on zero-weight computations; "
                            "use weighted_filter instead")
    states = M.states

    def step(key):
        i, s = key
        q = states[i]
        for a in M.alphabet:
            for j, r in enumerate(states):
                yield a, (j, prop.step(q, a, r, s)), 1

    return explore(M.alphabet, (((i, prop.init(q)), 1) for i, q in enumerate(states)),
                   step, lambda key: prop.cond(key[1]))


# ------------------------------------------------------- semiring properties

class _Propagator:
    """Sparse vector-matrix products of an automaton over a finite semiring."""

    def __init__(self, N: WeightedAutomaton, R: FiniteSemiring):
        self.R = R
        self.index = N.index
        self.succ = {key: [(j, R.tau(w)) for j, w in lst] for key, lst in N.successors.items()}
        self.in_tau = [R.tau(N.init.get(q, 0)) for q in N.states]
        self.out_tau = [R.tau(N.out.get(q, 0)) for q in N.states]
        self.cache: dict = {}

    def sparse(self, acc: dict) -> Vector:
        zero = self.R.zero
        return tuple(sorted((j, v) for j, v in acc.items() if v != zero))

    def propagate(self, a: str, s: Vector, acc: dict | None = None) -> dict:
        key = (a, s)
        hit = self.cache.get(key)
        if hit is None:
            R = self.R
            hit = {}
            for i, v in s:
                for j, t in self.succ.get((i, a), ()):
                    hit[j] = R.add(hit.get(j, R.zero), R.mul(v, t))
            self.cache[key] = hit
        return dict(hit)

    def total(self, s: Vector) -> int:
        R = self.R
        return R.sum(R.mul(v, self.out_tau[i]) for i, v in s)


def prop_global(N: WeightedAutomaton, R: FiniteSemiring, pi: Callable[[int], int]) -> StepwiseProperty:
    """``prop(w, P) = pi(tau(f_N(w)))`` for every computation ``P``.

    The step state is the vector of ``tau``-images of forward weights of the
    prefix read so far, so it does not depend on ``P``.
    """
    _require_simple(N)
    prop = _Propagator(N, R)
    s0 = prop.sparse(dict(enumerate(prop.in_tau)))

    def step(q, a, r, s):
        return prop.sparse(prop.propagate(a, s))

    return StepwiseProperty(lambda q: s0, step, lambda s: pi(prop.total(s)), f"global[{R.name}]")


def prop_lex_smaller(N: WeightedAutomaton, R: FiniteSemiring, pi: Callable[[int], int]) -> StepwiseProperty:
    """``prop(w, P) = pi(tau(#computations lexicographically smaller than P))``.

    Exact on computations of nonzero weight.  On zero-weight computations the
    same recurrence is applied blindly; callers only use the verdict through
    ``weighted_filter``, where such computations are multiplied by zero.
    """
    _require_simple(N)
    prop = _Propagator(N, R)
    idx = N.index
    add, zero = R.add, R.zero
    step_cache: dict = {}

    def init(q):
        k = idx[q]
        return prop.sparse({i: t for i, t in enumerate(prop.in_tau[:k])})

    def step(q, a, r, s):
        key = (q, a, r, s)
        hit = step_cache.get(key)
        if hit is None:
            acc = prop.propagate(a, s)
            k = idx[r]
            for j, t in prop.succ.get((idx[q], a), ()):
                if j < k:
                    acc[j] = add(acc.get(j, zero), t)
            hit = step_cache[key] = prop.sparse(acc)
        return hit

    return StepwiseProperty(init, step, lambda s: pi(prop.total(s)), f"lex[{R.name}]", lexicographic=True)


# ---------------------------------------------------------------- oracles

def filter_by_enumeration(M: WeightedAutomaton, prop: StepwiseProperty, word,
                          weighted: bool = True, budget: int | None = None) -> int:
    """``sum_P weight(P) * prop(w, P)`` (or the unweighted count) by enumeration."""
    w = M.parse_word(word)
    total = 0
    for path in all_computations(M, w, budget):
        weight = computation_weight(M, w, path) if weighted else 1
        if weight:
            total += weight * prop.run(w, path)
    return total
