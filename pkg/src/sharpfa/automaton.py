"""N-weighted finite automata: data model, evaluators, normalisation and I/O.

An automaton computes ``f(w) = sum over state sequences q0..qn of
in(q0) * prod wt(q_{i-1}, w_i, q_i) * out(qn)``.  ``evaluate`` does this with
vector-matrix products, ``count_paths_bruteforce`` by enumerating the
sequences; the latter is the reference oracle for every construction.
"""
from __future__ import annotations

import itertools
import json
import sys
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import InputError, ResourceLimitError, current_limits

State = Hashable
Symbol = str
Word = tuple  # tuple of symbols


def _clean(weights: Mapping, what: str) -> dict:
    out = {}
    for key, w in weights.items():
        if isinstance(w, bool) or not isinstance(w, int):
            raise InputError(f"{what} weight for {key!r} is not an integer: {w!r}")
        if w < 0:
            raise InputError(f"{what} weight for {key!r} is negative: {w}")
        if w:
            out[key] = w
    return out


@dataclass(frozen=True, eq=False)
class WeightedAutomaton:
    """Immutable N-weighted automaton ``(Q, Sigma, wt, in, out)``.

    ``states`` fixes the canonical total order used by lexicographic
    constructions.  Weight maps omit zero entries.
    """

    states: tuple
    alphabet: tuple
    trans: Mapping[tuple, int] = field(default_factory=dict)
    init: Mapping[State, int] = field(default_factory=dict)
    out: Mapping[State, int] = field(default_factory=dict)

    def __post_init__(self):
        states = tuple(self.states)
        alphabet = tuple(self.alphabet)
        if len(set(states)) != len(states):
            raise InputError("duplicate state identifiers")
        if len(set(alphabet)) != len(alphabet):
            raise InputError("duplicate alphabet symbols")
        trans = _clean(self.trans, "transition")
        init = _clean(self.init, "initial")
        out = _clean(self.out, "final")
        known, syms = set(states), set(alphabet)
        for p, a, q in trans:
            if p not in known or q not in known:
                raise InputError(f"transition {(p, a, q)!r} uses an undeclared state")
            if a not in syms:
                raise InputError(f"transition {(p, a, q)!r} uses symbol {a!r} outside the alphabet")
        for name, m in (("initial", init), ("final", out)):
            for q in m:
                if q not in known:
                    raise InputError(f"{name} weight on undeclared state {q!r}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "init", init)
        object.__setattr__(self, "out", out)

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return (f"WeightedAutomaton(|Q|={len(self.states)}, alphabet={list(self.alphabet)}, "
                f"|trans|={len(self.trans)})")

    @cached_property
    def index(self) -> dict:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def arcs(self) -> dict[Symbol, list[tuple[int, int, int]]]:
        """Per-symbol list of ``(src index, dst index, weight)``."""
        idx = self.index
        arcs: dict[Symbol, list] = {a: [] for a in self.alphabet}
        for (p, a, q), w in self.trans.items():
            arcs[a].append((idx[p], idx[q], w))
        for lst in arcs.values():
            lst.sort()
        return arcs

    @cached_property
    def successors(self) -> dict[tuple[int, Symbol], list[tuple[int, int]]]:
        """``(src index, symbol) -> [(dst index, weight), ...]`` in state order."""
        succ: dict[tuple[int, Symbol], list] = {}
        for a, lst in self.arcs.items():
            for i, j, w in lst:
                succ.setdefault((i, a), []).append((j, w))
        return succ

    @property
    def is_simple(self) -> bool:
        return all(w == 1 for m in (self.trans, self.init, self.out) for w in m.values())

    @property
    def max_weight(self) -> int:
        return max(itertools.chain(self.trans.values(), self.init.values(), self.out.values()), default=0)

    def same_weights(self, other: WeightedAutomaton) -> bool:
        return (self.states == other.states and self.alphabet == other.alphabet
                and self.trans == other.trans and self.init == other.init and self.out == other.out)

    def parse_word(self, word: str | Sequence[Symbol]) -> Word:
        return parse_word(self.alphabet, word)

    def __call__(self, word) -> int:
        return evaluate(self, word)


def parse_word(alphabet: Sequence[Symbol], word: str | Sequence[Symbol]) -> Word:
    """Turn ``word`` into a tuple of symbols, checking membership in ``alphabet``.

    Strings are split into characters when every symbol is a single
    character, otherwise on commas.
    """
    if isinstance(word, str):
        if all(len(a) == 1 for a in alphabet):
            symbols = tuple(word)
        else:
            symbols = tuple(s.strip() for s in word.split(",")) if word.strip() else ()
    else:
        symbols = tuple(word)
    allowed = set(alphabet)
    for s in symbols:
        if s not in allowed:
            raise InputError(f"symbol {s!r} is not in the alphabet {list(alphabet)}")
    return symbols


def words(alphabet: Sequence[Symbol], max_len: int) -> Iterator[Word]:
    """All words of length ``<= max_len`` in shortlex order."""
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


# ---------------------------------------------------------------- evaluators

def evaluate(M: WeightedAutomaton, word) -> int:
    """``a^T * A_{w1} * ... * A_{wn} * b`` with exact integers."""
    w = M.parse_word(word)
    n = len(M.states)
    idx = M.index
    vec = [0] * n
    for q, x in M.init.items():
        vec[idx[q]] = x
    arcs = M.arcs
    for a in w:
        nxt = [0] * n
        for i, j, x in arcs[a]:
            v = vec[i]
            if v:
                nxt[j] += v * x
        vec = nxt
    return sum(vec[idx[q]] * x for q, x in M.out.items())


def computation_weight(M: WeightedAutomaton, word, path: Sequence[State], partial: bool = False) -> int:
    """Weight of one computation; ``partial`` drops the final-weight factor."""
    w = M.parse_word(word)
    if len(path) != len(w) + 1:
        raise InputError("a computation on a word of length n has n+1 states")
    weight = M.init.get(path[0], 0)
    for a, p, q in zip(w, path, path[1:]):
        if not weight:
            return 0
        weight *= M.trans.get((p, a, q), 0)
    return weight if partial else weight * M.out.get(path[-1], 0)


def _check_budget(M: WeightedAutomaton, length: int, budget: int | None) -> None:
    budget = current_limits().oracle_budget if budget is None else budget
    if len(M.states) ** (length + 1) > budget:
        raise ResourceLimitError(
            f"brute force needs {len(M.states)}^{length + 1} computations, budget is {budget}")


def all_computations(M: WeightedAutomaton, word, budget: int | None = None) -> Iterator[tuple]:
    """Every state sequence of length ``|w|+1``, in lexicographic order."""
    w = M.parse_word(word)
    _check_budget(M, len(w), budget)
    return itertools.product(M.states, repeat=len(w) + 1)


def count_paths_bruteforce(M: WeightedAutomaton, word, budget: int | None = None) -> int:
    """Sum of computation weights by explicit enumeration of state sequences.

    Prefixes of partial weight zero are skipped, since every extension of
    them has weight zero.
    """
    w = M.parse_word(word)
    _check_budget(M, len(w), budget)
    n = len(w)
    states, trans, out = M.states, M.trans, M.out
    total = 0
    stack = [(q, 0, x) for q, x in M.init.items()]
    while stack:
        q, depth, weight = stack.pop()
        if depth == n:
            total += weight * out.get(q, 0)
            continue
        a = w[depth]
        for r in states:
            x = trans.get((q, a, r), 0)
            if x:
                stack.append((r, depth + 1, weight * x))
    return total


# -------------------------------------------------------------- matrix form

class MatrixForm(NamedTuple):
    init: list[int]
    matrices: dict[Symbol, list[list[int]]]
    final: list[int]


def to_matrix_form(M: WeightedAutomaton) -> MatrixForm:
    n = len(M.states)
    idx = M.index
    mats = {a: [[0] * n for _ in range(n)] for a in M.alphabet}
    for (p, a, q), x in M.trans.items():
        mats[a][idx[p]][idx[q]] = x
    return MatrixForm([M.init.get(q, 0) for q in M.states], mats, [M.out.get(q, 0) for q in M.states])


def from_matrix_form(init: Sequence[int], matrices: Mapping[Symbol, Sequence[Sequence[int]]],
                     final: Sequence[int], states: Sequence[State] | None = None) -> WeightedAutomaton:
    n = len(init)
    states = tuple(range(n)) if states is None else tuple(states)
    if len(final) != n or len(states) != n:
        raise InputError("init, final and states must have the same length")
    trans = {}
    for a, A in matrices.items():
        if len(A) != n or any(len(row) != n for row in A):
            raise InputError(f"matrix for {a!r} is not {n}x{n}")
        for i, row in enumerate(A):
            for j, x in enumerate(row):
                if x:
                    trans[states[i], a, states[j]] = x
    return WeightedAutomaton(states, tuple(matrices), trans,
                             {states[i]: x for i, x in enumerate(init) if x},
                             {states[i]: x for i, x in enumerate(final) if x})


def evaluate_matrix_form(form: MatrixForm, word: Sequence[Symbol]) -> int:
    vec = list(form.init)
    for a in word:
        try:
            A = form.matrices[a]
        except KeyError:
            raise InputError(f"symbol {a!r} has no matrix") from None
        vec = [sum(vec[i] * A[i][j] for i in range(len(vec))) for j in range(len(vec))]
    return sum(x * y for x, y in zip(vec, form.final))


# ------------------------------------------------------------ normalisation

def relabel(M: WeightedAutomaton, names: Callable[[int, State], State] | None = None) -> WeightedAutomaton:
    """Rename states, keeping their order; default names are ``0..n-1``."""
    names = names or (lambda i, q: i)
    new = {q: names(i, q) for i, q in enumerate(M.states)}
    return WeightedAutomaton(
        tuple(new[q] for q in M.states), M.alphabet,
        {(new[p], a, new[q]): x for (p, a, q), x in M.trans.items()},
        {new[q]: x for q, x in M.init.items()},
        {new[q]: x for q, x in M.out.items()})


def trim(M: WeightedAutomaton) -> WeightedAutomaton:
    """Drop states that are unreachable or cannot reach a final state."""
    fwd: dict = {}
    bwd: dict = {}
    for (p, _, q) in M.trans:
        fwd.setdefault(p, set()).add(q)
        bwd.setdefault(q, set()).add(p)

    def closure(seeds, edges):
        seen = set(seeds)
        todo = list(seeds)
        while todo:
            for r in edges.get(todo.pop(), ()):
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return seen

    keep = closure(M.init, fwd) & closure(M.out, bwd)
    if len(keep) == len(M.states):
        return M
    return WeightedAutomaton(
        tuple(q for q in M.states if q in keep), M.alphabet,
        {(p, a, q): x for (p, a, q), x in M.trans.items() if p in keep and q in keep},
        {q: x for q, x in M.init.items() if q in keep},
        {q: x for q, x in M.out.items() if q in keep})


def explore(alphabet: Sequence[Symbol],
            initial: Iterable[tuple[Hashable, int]],
            step: Callable[[Hashable], Iterable[tuple[Symbol, Hashable, int]]],
            final: Callable[[Hashable], int]) -> WeightedAutomaton:
    """Build the part of an implicitly given automaton reachable from ``initial``.

    States are discovered breadth-first, numbered in discovery order, and the
    result is trimmed.  Raises ``ResourceLimitError`` past ``max_states``.
    """
    limit = current_limits().max_states
    ids: dict[Hashable, int] = {}
    init: dict[int, int] = {}
    queue: deque = deque()

    def visit(key):
        i = ids.get(key)
        if i is None:
            i = ids[key] = len(ids)
            if i >= limit:
                raise ResourceLimitError(f"construction exceeded max_states={limit}")
            queue.append(key)
        return i

    for key, x in initial:
        if x:
            i = visit(key)
            init[i] = init.get(i, 0) + x
    trans: dict[tuple, int] = {}
    out: dict[int, int] = {}
    while queue:
        key = queue.popleft()
        i = ids[key]
        f = final(key)
        if f:
            out[i] = f
        for a, key2, x in step(key):
            if x:
                t = (i, a, visit(key2))
                trans[t] = trans.get(t, 0) + x
    return relabel(trim(WeightedAutomaton(tuple(range(len(ids))), tuple(alphabet), trans, init, out)))


def simplify(M: WeightedAutomaton, full: bool = False) -> WeightedAutomaton:
    """A simple (all weights in {0,1}) automaton computing the same function.

    States are triples ``(q, alpha, beta)`` with ``alpha <= max(wt, in)`` and
    ``beta <= max(out)``: a computation of weight k is split into k unit
    computations by choosing ``alpha`` below each transition/initial weight and
    ``beta`` below the final weight; ``beta`` must be 1 on all but the last
    state.  With ``full=True`` the whole product is returned untrimmed;
    otherwise already-simple inputs are returned as is and the rest is trimmed.
    """
    if M.is_simple and not full:
        return M
    K = max(itertools.chain(M.trans.values(), M.init.values()), default=0)
    L = max(M.out.values(), default=0)
    states = [(q, al, be) for q in M.states for al in range(1, K + 1) for be in range(1, L + 1)]
    trans = {}
    for (p, a, q), x in M.trans.items():
        for al in range(1, K + 1):
            for al2 in range(1, x + 1):
                for be2 in range(1, L + 1):
                    trans[(p, al, 1), a, (q, al2, be2)] = 1
    init = {(q, al, be): 1 for q, x in M.init.items() for al in range(1, x + 1) for be in range(1, L + 1)}
    out = {(q, al, be): 1 for q, x in M.out.items() for al in range(1, K + 1) for be in range(1, x + 1)}
    S = WeightedAutomaton(tuple(states), M.alphabet, trans, init, out)
    return S if full else relabel(trim(S))


# ----------------------------------------------------------------- builders

def zero(alphabet: Sequence[Symbol]) -> WeightedAutomaton:
    """The automaton with no states; it computes 0 everywhere."""
    return WeightedAutomaton((), tuple(alphabet))


def constant(c: int, alphabet: Sequence[Symbol]) -> WeightedAutomaton:
    if c < 0:
        raise InputError("constants must be nonnegative")
    alphabet = tuple(alphabet)
    return WeightedAutomaton(("c",), alphabet, {("c", a, "c"): 1 for a in alphabet}, {"c": c}, {"c": 1})


def unary_counter(symbol: Symbol = "1") -> WeightedAutomaton:
    """``1^n -> n``: loop on S, one step S -> A, loop on A."""
    return WeightedAutomaton(("S", "A"), (symbol,),
                             {("S", symbol, "S"): 1, ("S", symbol, "A"): 1, ("A", symbol, "A"): 1},
                             {"S": 1}, {"A": 1})


def unary_doubler(symbol: Symbol = "1") -> WeightedAutomaton:
    """``1^n -> 2^n``: one initial and accepting state with a doubled loop."""
    return WeightedAutomaton(("S",), (symbol,), {("S", symbol, "S"): 2}, {"S": 1}, {"S": 1})


def binary_value(alphabet: Sequence[Symbol] = ("0", "1")) -> WeightedAutomaton:
    """Value of the input read as a binary number; other symbols are skipped.

    Matrix form ``a = (1, 0)``, ``A_s = ((1, s), (0, 2))``, ``b = (0, 1)``.
    """
    alphabet = tuple(alphabet)
    if "0" not in alphabet or "1" not in alphabet:
        raise InputError("binary_value needs the symbols '0' and '1'")
    trans = {}
    for a in alphabet:
        if a in ("0", "1"):
            trans["S", a, "S"] = 1
            trans["S", a, "A"] = int(a)
            trans["A", a, "A"] = 2
        else:
            trans["S", a, "S"] = 1
            trans["A", a, "A"] = 1
    return WeightedAutomaton(("S", "A"), alphabet, trans, {"S": 1}, {"A": 1})


def letter_counter(alphabet: Sequence[Symbol], symbol: Symbol) -> WeightedAutomaton:
    """Number of occurrences of ``symbol`` in the input."""
    alphabet = tuple(alphabet)
    if symbol not in alphabet:
        raise InputError(f"{symbol!r} is not in the alphabet {list(alphabet)}")
    trans = {("S", a, "S"): 1 for a in alphabet}
    trans.update({("A", a, "A"): 1 for a in alphabet})
    trans["S", symbol, "A"] = 1
    return WeightedAutomaton(("S", "A"), alphabet, trans, {"S": 1}, {"A": 1})


# ------------------------------------------------------------------ JSON I/O

def to_json_dict(M: WeightedAutomaton, include_matrices: bool = False) -> dict[str, Any]:
    """Serialisable form; non-string state names are replaced by ``q0, q1, ...``."""
    if not all(isinstance(q, str) for q in M.states):
        M = relabel(M, lambda i, q: f"q{i}")
    data: dict[str, Any] = {
        "alphabet": list(M.alphabet),
        "states": list(M.states),
        "init": {q: str(M.init[q]) for q in M.states if q in M.init},
        "out": {q: str(M.out[q]) for q in M.states if q in M.out},
        "trans": [{"from": p, "sym": a, "to": q, "w": str(x)}
                  for (p, a, q), x in sorted(M.trans.items(),
                                             key=lambda t: (M.index[t[0][0]], M.alphabet.index(t[0][1]),
                                                            M.index[t[0][2]]))],
    }
    if include_matrices:
        form = to_matrix_form(M)
        data["matrix_form"] = {"init": [str(x) for x in form.init],
                               "matrices": {a: [[str(x) for x in row] for row in A]
                                            for a, A in form.matrices.items()},
                               "final": [str(x) for x in form.final]}
    return data


def _weight(x: Any) -> int:
    if isinstance(x, bool):
        raise InputError(f"bad weight {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str) and x.strip().isdigit():
        return int(x)
    raise InputError(f"bad weight {x!r}; expected a decimal string")


def from_json_dict(data: Mapping[str, Any]) -> WeightedAutomaton:
    try:
        alphabet = [str(a) for a in data["alphabet"]]
        states = [str(q) for q in data["states"]]
        trans: dict = {}
        for t in data.get("trans", []):
            key = (str(t["from"]), str(t["sym"]), str(t["to"]))
            trans[key] = trans.get(key, 0) + _weight(t.get("w", "1"))
        init = {str(q): _weight(x) for q, x in data.get("init", {}).items()}
        out = {str(q): _weight(x) for q, x in data.get("out", {}).items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed automaton JSON: {exc!r}") from None
    return WeightedAutomaton(tuple(states), tuple(alphabet), trans, init, out)


def matrix_form_from_json(data: Mapping[str, Any]) -> MatrixForm | None:
    """The optional precomputed ``matrix_form`` section of an automaton file."""
    mf = data.get("matrix_form")
    if mf is None:
        return None
    try:
        return MatrixForm([_weight(x) for x in mf["init"]],
                          {str(a): [[_weight(x) for x in row] for row in A] for a, A in mf["matrices"].items()},
                          [_weight(x) for x in mf["final"]])
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed matrix_form section: {exc!r}") from None


def dumps(M: WeightedAutomaton, include_matrices: bool = False) -> str:
    return json.dumps(to_json_dict(M, include_matrices), indent=1) + "\n"


def loads(text: str) -> WeightedAutomaton:
    return from_json_dict(read_json_text(text))


def read_json_text(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None


def load(path: str) -> WeightedAutomaton:
    return loads(read_text(path))


def dump(M: WeightedAutomaton, path: str, include_matrices: bool = False) -> None:
    text = dumps(M, include_matrices)
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
