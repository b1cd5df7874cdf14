"""Closure operations: automata for ``phi(f)`` (or ``f + g``, ``f * g``) from automata for ``f``, ``g``.

Every operation returns a fresh automaton with integer states ``0..n-1``.
Operations that need a simple automaton simplify their input first.  Output
automata are trimmed but not minimized.
"""
from __future__ import annotations

import itertools
import math
from typing import Callable, Mapping, Sequence

from .automaton import WeightedAutomaton, constant, explore, relabel, simplify, trim, zero
from .binomial import BinomialPoly, MultiBinomialPoly, cauchy_bound, shift_binomial_basis
from .errors import InputError, ResourceLimitError, current_limits
from .semiring import capped, cyclic
from .stepwise import StepwiseProperty, count_satisfying, prop_global, prop_lex_smaller, weighted_filter

RELATIONS = {
    "=": lambda a, c: a == c, "eq": lambda a, c: a == c,
    "<=": lambda a, c: a <= c, "le": lambda a, c: a <= c,
    ">=": lambda a, c: a >= c, "ge": lambda a, c: a >= c,
}


def _alphabet(*Ms: WeightedAutomaton) -> tuple:
    alpha = Ms[0].alphabet
    for M in Ms[1:]:
        if tuple(M.alphabet) != tuple(alpha):
            raise InputError(f"alphabet mismatch: {list(alpha)} vs {list(M.alphabet)}")
    return alpha


def _nonneg_int(c, what: str) -> int:
    if not isinstance(c, int) or isinstance(c, bool) or c < 0:
        raise InputError(f"{what} must be a natural number, got {c!r}")
    return c


def _simple_nonempty(M: WeightedAutomaton) -> WeightedAutomaton:
    """Simple version of ``M`` with at least one state (needed by counting constructions)."""
    S = simplify(M)
    if not S.states:
        S = WeightedAutomaton((0,), S.alphabet)
    return S


# ------------------------------------------------------------ arithmetic

def add(*Ms: WeightedAutomaton) -> WeightedAutomaton:
    """Disjoint union: ``f_1 + ... + f_k``."""
    if not Ms:
        raise InputError("add needs at least one automaton")
    alpha = _alphabet(*Ms)
    states, trans, init, out = [], {}, {}, {}
    for k, M in enumerate(Ms):
        states += [(k, q) for q in M.states]
        trans.update({((k, p), a, (k, q)): x for (p, a, q), x in M.trans.items()})
        init.update({(k, q): x for q, x in M.init.items()})
        out.update({(k, q): x for q, x in M.out.items()})
    return relabel(WeightedAutomaton(tuple(states), alpha, trans, init, out))


def hadamard(*Ms: WeightedAutomaton) -> WeightedAutomaton:
    """Product automaton: ``f_1 * ... * f_k`` pointwise."""
    if not Ms:
        raise InputError("hadamard needs at least one automaton")
    alpha = _alphabet(*Ms)
    if len(Ms) == 1:
        return relabel(Ms[0])
    succ = [M.successors for M in Ms]
    inits = [[(M.index[q], x) for q, x in M.init.items()] for M in Ms]
    outs = [{M.index[q]: x for q, x in M.out.items()} for M in Ms]

    def initial(k=0):
        if k == len(Ms):
            yield (), 1
            return
        for i, x in inits[k]:
            for rest, y in initial(k + 1):
                yield (i,) + rest, x * y

    def step(key):
        for a in alpha:
            partial = [((), 1)]
            for k, i in enumerate(key):
                nxt = succ[k].get((i, a), ())
                partial = [(t + (j,), x * w) for t, x in partial for j, w in nxt]
                if not partial:
                    break
            for t, x in partial:
                yield a, t, x

    return explore(alpha, initial(), step, lambda key: math.prod(o.get(i, 0) for o, i in zip(outs, key)))


def scale(M: WeightedAutomaton, k: int) -> WeightedAutomaton:
    """``k * f``, by multiplying the initial weights."""
    _nonneg_int(k, "scale factor")
    if k == 0:
        return zero(M.alphabet)
    return relabel(WeightedAutomaton(M.states, M.alphabet, M.trans,
                                     {q: k * x for q, x in M.init.items()}, M.out))


# ------------------------------------------------- stepwise-filter closures

def sub_const(M: WeightedAutomaton, c: int) -> WeightedAutomaton:
    """``max(f - c, 0)``: keep the computations that have at least ``c`` lexicographically smaller ones."""
    _nonneg_int(c, "c")
    if c == 0:
        return relabel(M)
    S = simplify(M)
    return weighted_filter(S, prop_lex_smaller(S, capped(c), lambda a: int(a >= c)))


def clamp(M: WeightedAutomaton, c: int) -> WeightedAutomaton:
    """``min(f, c)``: keep the ``c`` lexicographically smallest computations."""
    _nonneg_int(c, "c")
    if c == 0:
        return zero(M.alphabet)
    S = simplify(M)
    return weighted_filter(S, prop_lex_smaller(S, capped(c), lambda a: int(a < c)))


def indicator(M: WeightedAutomaton, rel: str, c: int) -> WeightedAutomaton:
    """``1_{f rel c}`` for ``rel`` one of ``=``, ``<=``, ``>=``."""
    _nonneg_int(c, "c")
    try:
        test = RELATIONS[rel]
    except KeyError:
        raise InputError(f"unknown relation {rel!r}; use =, <= or >=") from None
    S = _simple_nonempty(M)
    # every computation (there are |Q|^(|w|+1) of them) sees the same verdict
    counted = count_satisfying(S, prop_global(S, capped(c + 1), lambda a: int(test(a, c))))
    return clamp(counted, 1)


def div_const(M: WeightedAutomaton, c: int) -> WeightedAutomaton:
    """``floor(f / c)``: keep computations whose lexicographic rank is ``c - 1`` mod ``c``."""
    _nonneg_int(c, "c")
    if c == 0:
        raise InputError("division by zero")
    if c == 1:
        return relabel(M)
    S = simplify(M)
    return weighted_filter(S, prop_lex_smaller(S, cyclic(c), lambda a: int(a == c - 1)))


def mod_indicator(M: WeightedAutomaton, c: int, d: int) -> WeightedAutomaton:
    """``1_{f = d (mod c)}``."""
    _nonneg_int(c, "c")
    if c == 0:
        raise InputError("modulus must be at least 1")
    if not isinstance(d, int) or not 0 <= d < c:
        raise InputError(f"residue d must lie in 0..{c - 1}, got {d!r}")
    S = _simple_nonempty(M)
    counted = count_satisfying(S, prop_global(S, cyclic(c), lambda a: int(a == d)))
    return clamp(counted, 1)


def _partition(labels: Sequence) -> tuple:
    """Canonical block labels (first occurrence order) of the equivalence 'same label'."""
    seen: dict = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def binom_const(M: WeightedAutomaton, c: int, method: str = "sorted") -> WeightedAutomaton:
    """``C(f, c)`` from ``c``-tuples of computations of the simplified input.

    ``method="sorted"`` counts tuples that are strictly increasing in
    lexicographic order; the side information is, for each adjacent pair,
    whether the two computations are still equal, already smaller or already
    larger.  ``method="divide"`` counts tuples of pairwise distinct
    computations (side information: the equivalence relation "agree so
    far") and divides by ``c!``; it computes the same function but the final
    division multiplies the state count considerably.
    """
    _nonneg_int(c, "c")
    if method not in ("sorted", "divide"):
        raise InputError(f"unknown binom method {method!r}")
    cap = current_limits().max_binom
    if c > cap:
        raise ResourceLimitError(f"binom_const with c={c} exceeds max_binom={cap}")
    if c == 0:
        return constant(1, M.alphabet)
    if c == 1:
        return relabel(M)
    tuples = _tuple_product(simplify(M), c)
    if method == "divide":
        def refine(t, a, u, blocks):
            return _partition(tuple(zip(blocks, u)))

        distinct = StepwiseProperty(_partition, refine, lambda blocks: int(len(set(blocks)) == c),
                                    f"distinct[{c}]")
        return div_const(weighted_filter(tuples, distinct), math.factorial(c))

    def compare(t):
        return tuple((t[i] > t[i + 1]) - (t[i] < t[i + 1]) for i in range(c - 1))

    def advance(t, a, u, rel):
        return tuple(r if r else x for r, x in zip(rel, compare(u)))

    increasing = StepwiseProperty(compare, advance, lambda rel: int(all(r < 0 for r in rel)), f"sorted[{c}]")
    return weighted_filter(tuples, increasing)


def _tuple_product(S: WeightedAutomaton, c: int) -> WeightedAutomaton:
    """``c``-fold product of a simple automaton whose states are the index tuples themselves."""
    succ = S.successors
    trans = {}
    seen = set()
    init = {t: 1 for t in itertools.product([S.index[q] for q in S.init], repeat=c)}
    todo = list(init)
    seen.update(todo)
    limit = current_limits().max_states
    while todo:
        t = todo.pop()
        for a in S.alphabet:
            partial = [()]
            for i in t:
                nxt = succ.get((i, a), ())
                partial = [u + (j,) for u in partial for j, _ in nxt]
                if not partial:
                    break
            for u in partial:
                trans[t, a, u] = 1
                if u not in seen:
                    if len(seen) >= limit:
                        raise ResourceLimitError(f"construction exceeded max_states={limit}")
                    seen.add(u)
                    todo.append(u)
    out_idx = {S.index[q] for q in S.out}
    out = {t: 1 for t in seen if all(i in out_idx for i in t)}
    return trim(WeightedAutomaton(tuple(sorted(seen)), S.alphabet, trans, init, out))


# ------------------------------------------------- polynomial compositions

def patch_finite(M: WeightedAutomaton, patches: Mapping[int, int] | Sequence[int],
                 tail: WeightedAutomaton | Callable[[WeightedAutomaton], WeightedAutomaton] | None = None
                 ) -> WeightedAutomaton:
    """``patches[f]`` where ``f < N``, else the tail function.

    ``patches`` covers ``0..N-1``; ``tail`` is an automaton, a function of
    ``M`` returning one, or ``None`` for ``f`` itself.  Built as
    ``sum_i psi(i) * 1_{f=i} + 1_{f>=N} * tail``.
    """
    if not isinstance(patches, Mapping):
        patches = dict(enumerate(patches))
    N = len(patches)
    if sorted(patches) != list(range(N)):
        raise InputError("patches must cover exactly 0..N-1")
    if tail is None:
        tail_M = M
    elif isinstance(tail, WeightedAutomaton):
        tail_M = tail
    else:
        tail_M = tail(M)
    _alphabet(M, tail_M)
    if N == 0:
        return relabel(tail_M)
    parts = [scale(indicator(M, "=", i), _nonneg_int(v, "patch value")) for i, v in sorted(patches.items()) if v]
    if tail_M.states:
        parts.append(hadamard(indicator(M, ">=", N), tail_M))
    return add(*parts) if parts else zero(M.alphabet)


def _as_binomial(phi) -> BinomialPoly:
    if isinstance(phi, BinomialPoly):
        return phi
    if isinstance(phi, MultiBinomialPoly):
        if phi.nvars != 1:
            raise InputError("expected a univariate polynomial")
        return BinomialPoly([phi.coeffs.get((i,), 0) for i in range(phi.degree_in(0) + 1)])
    raise InputError(f"expected a binomial-basis polynomial, got {type(phi).__name__}")


def poly_nonneg(M: WeightedAutomaton, phi) -> WeightedAutomaton:
    """``max(phi(f), 0)`` for an integer-valued polynomial ``phi``.

    With a positive leading coefficient ``phi = sum b_i C(x - c_i, i)``;
    for ``f >= max c_i`` this equals ``sum b_i C(max(f - c_i, 0), i)``, and
    the finitely many smaller values of ``f`` are patched.  With a negative
    leading coefficient ``max(phi, 0)`` vanishes beyond a root bound and the
    result is a finite sum of indicators.
    """
    phi = _as_binomial(phi)
    if not phi.is_integer_valued():
        raise InputError(f"{phi} is not integer-valued")
    if phi.is_zero():
        return zero(M.alphabet)
    if phi.leading < 0:
        bound = cauchy_bound(phi.to_monomial())
        return patch_finite(M, [max(phi(i), 0) for i in range(bound)], zero(M.alphabet))
    shifted = shift_binomial_basis(phi)
    subs: dict[int, WeightedAutomaton] = {}
    terms = []
    for b, c, i in shifted.terms:
        if c not in subs:
            subs[c] = sub_const(M, c)
        terms.append(scale(binom_const(subs[c], i), b))
    tail = add(*terms)
    N = shifted.max_shift
    return patch_finite(M, [max(phi(i), 0) for i in range(N)], tail)


def porc_compose(M: WeightedAutomaton, phi) -> WeightedAutomaton:
    """``phi(f)`` for an ultimately PORC function ``phi``.

    ``sum_{i<N} phi(i) 1_{f=i} + 1_{f>=N} sum_i 1_{f = i (mod p)} floor(max(alpha_i phi_i(f), 0) / alpha_i)``
    where ``alpha_i`` clears the denominators of the ``i``-th constituent.
    """
    from .porc import PorcFunction
    if not isinstance(phi, PorcFunction):
        raise InputError(f"expected a PorcFunction, got {type(phi).__name__}")
    p = phi.period
    parts = []
    for i in range(p):
        q = phi.constituent(i)
        if q.is_zero():
            continue
        alpha = q.common_denominator()
        part = div_const(poly_nonneg(M, q.scale(alpha)), alpha)
        if p > 1:
            part = hadamard(mod_indicator(M, p, i), part)
        parts.append(part)
    tail = add(*parts) if parts else zero(M.alphabet)
    return patch_finite(M, list(phi.initial_values), tail)
