"""Growth of the diagonal entries ``(A^n)_vv`` of a natural-number matrix.

Exactly one of three patterns occurs: the entry is always 0 for ``n >= 1``
(no closed walk through ``v``), it is ``1_{p | n}`` (the strongly connected
component of ``v`` is one simple cycle of unit weights), or it is
``1_{p | n} * g(n)`` with ``g`` eventually at least 2 and at most
exponential.  The classification here is purely graph-theoretic; the
verifier compares it with exact matrix powers.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .errors import InputError

ZERO, PERIODIC, EXPONENTIAL = "Zero", "Periodic", "Exponential"


@dataclass(frozen=True)
class DiagonalClass:
    kind: str
    period: int | None = None

    def __str__(self) -> str:
        return self.kind if self.period is None else f"{self.kind}({self.period})"


def _check_matrix(A: Sequence[Sequence[int]]) -> list[list[int]]:
    k = len(A)
    rows = []
    for row in A:
        if len(row) != k:
            raise InputError("matrix must be square")
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise InputError(f"matrix entries must be natural numbers, got {x!r}")
        rows.append(list(row))
    return rows


def _component(A: list[list[int]], v: int) -> set[int]:
    G = nx.DiGraph()
    G.add_nodes_from(range(len(A)))
    G.add_edges_from((i, j) for i, row in enumerate(A) for j, x in enumerate(row) if x)
    for comp in nx.strongly_connected_components(G):
        if v in comp:
            return set(comp)
    raise AssertionError("unreachable")  # pragma: no cover


def _period(A: list[list[int]], comp: set[int], v: int) -> int:
    """gcd of closed-walk lengths in a strongly connected component, via BFS levels."""
    level = {v: 0}
    todo = deque([v])
    while todo:
        u = todo.popleft()
        for w in comp:
            if A[u][w] and w not in level:
                level[w] = level[u] + 1
                todo.append(w)
    g = 0
    for u in comp:
        for w in comp:
            if A[u][w]:
                g = math.gcd(g, level[u] + 1 - level[w])
    return g


def classify_diagonal(A: Sequence[Sequence[int]], v: int) -> DiagonalClass:
    A = _check_matrix(A)
    if not isinstance(v, int) or not 0 <= v < len(A):
        raise InputError(f"vertex {v!r} out of range for a {len(A)}x{len(A)} matrix")
    comp = _component(A, v)
    if comp == {v} and A[v][v] == 0:
        return DiagonalClass(ZERO)
    if all(sum(A[u][w] for w in comp) == 1 for u in comp):
        return DiagonalClass(PERIODIC, len(comp))
    return DiagonalClass(EXPONENTIAL, _period(A, comp, v))


def diagonal_sequence(A: Sequence[Sequence[int]], v: int, horizon: int) -> list[int]:
    """``(A^n)_vv`` for ``n = 0..horizon``, exactly (row vector times ``A``)."""
    A = _check_matrix(A)
    k = len(A)
    row = [int(i == v) for i in range(k)]
    out = [row[v]]
    for _ in range(horizon):
        row = [sum(row[i] * A[i][j] for i in range(k) if row[i]) for j in range(k)]
        out.append(row[v])
    return out


@dataclass
class Report:
    verdict: DiagonalClass
    values: list[int]
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def verify_classification(A: Sequence[Sequence[int]], v: int, horizon: int = 20) -> Report:
    """Compare the classification with ``(A^n)_vv`` for ``n <= horizon``.

    Zero: all values for ``n >= 1`` vanish.  Periodic(p): the values are
    exactly ``1_{p | n}``.  Exponential(p): values off multiples of ``p``
    vanish, some value is at least 2, the last multiple of ``p`` in range
    has a positive value, and all values respect ``(k * max entry)^n``.
    "Eventually at least 2" can only be observed inside the horizon.
    """
    A = _check_matrix(A)
    k = len(A)
    if horizon < 2 * k:
        raise InputError(f"horizon must be at least 2*|A| = {2 * k}")
    cls = classify_diagonal(A, v)
    vals = diagonal_sequence(A, v, horizon)
    rep = Report(cls, vals)
    bad = rep.problems
    if cls.kind == ZERO:
        bad += [f"n={n}: expected 0, got {x}" for n, x in enumerate(vals) if n and x]
        return rep
    p = cls.period
    for n, x in enumerate(vals):
        if n % p and x:
            bad.append(f"n={n}: expected 0 off multiples of {p}, got {x}")
    if cls.kind == PERIODIC:
        bad += [f"n={n}: expected 1, got {x}" for n, x in enumerate(vals) if n % p == 0 and x != 1]
        return rep
    if max(vals) < 2:
        bad.append(f"no value >= 2 up to n={horizon}")
    last = horizon - horizon % p
    if vals[last] == 0:
        bad.append(f"n={last}: expected a positive value on the residue class")
    top = k * max(max(r) for r in A)
    bad += [f"n={n}: value {x} exceeds {top}^{n}" for n, x in enumerate(vals) if x > top ** n]
    return rep
