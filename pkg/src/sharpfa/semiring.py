"""Finite semirings and the unique homomorphism from the naturals into them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import InputError


@dataclass(frozen=True, eq=False)
class FiniteSemiring:
    """Carrier ``{0, ..., size-1}`` with ``add``/``mul`` and identities ``zero``/``one``."""

    name: str
    size: int
    add: Callable[[int, int], int]
    mul: Callable[[int, int], int]
    zero: int
    one: int
    _orbit: tuple = field(init=False, repr=False)
    _tail: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.size < 1:
            raise InputError("a semiring needs a nonempty carrier")
        if not (0 <= self.zero < self.size and 0 <= self.one < self.size):
            raise InputError("zero and one must lie in the carrier")
        # tau(n) = one + ... + one is eventually periodic; store the
        # preperiodic part followed by one full cycle.
        seen: dict[int, int] = {}
        orbit = []
        x = self.zero
        while x not in seen:
            seen[x] = len(orbit)
            orbit.append(x)
            x = self.add(x, self.one)
        object.__setattr__(self, "_orbit", tuple(orbit))
        object.__setattr__(self, "_tail", seen[x])

    def __repr__(self) -> str:
        return f"FiniteSemiring({self.name})"

    @property
    def carrier(self) -> range:
        return range(self.size)

    def tau(self, n: int) -> int:
        """Image of the natural number ``n``."""
        if n < 0:
            raise InputError("tau is defined on the naturals only")
        orbit, mu = self._orbit, self._tail
        if n < len(orbit):
            return orbit[n]
        return orbit[mu + (n - mu) % (len(orbit) - mu)]

    def sum(self, xs) -> int:
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def axiom_violations(self) -> list[str]:
        """Exhaustive check of the semiring axioms; empty when all hold."""
        C, add, mul, z, o = self.carrier, self.add, self.mul, self.zero, self.one
        bad = []
        for a in C:
            if add(a, z) != a or add(z, a) != a:
                bad.append(f"zero is not additive identity at {a}")
            if mul(a, o) != a or mul(o, a) != a:
                bad.append(f"one is not multiplicative identity at {a}")
            if mul(a, z) != z or mul(z, a) != z:
                bad.append(f"zero does not annihilate {a}")
            for b in C:
                if add(a, b) not in C or mul(a, b) not in C:
                    bad.append(f"operation leaves the carrier at ({a}, {b})")
                    continue
                if add(a, b) != add(b, a):
                    bad.append(f"addition not commutative at ({a}, {b})")
                for c in C:
                    if add(add(a, b), c) != add(a, add(b, c)):
                        bad.append(f"addition not associative at ({a}, {b}, {c})")
                    if mul(mul(a, b), c) != mul(a, mul(b, c)):
                        bad.append(f"multiplication not associative at ({a}, {b}, {c})")
                    if mul(a, add(b, c)) != add(mul(a, b), mul(a, c)):
                        bad.append(f"left distributivity fails at ({a}, {b}, {c})")
                    if mul(add(b, c), a) != add(mul(b, a), mul(c, a)):
                        bad.append(f"right distributivity fails at ({a}, {b}, {c})")
        return bad

    def homomorphism_violations(self, bound: int | None = None) -> list[str]:
        """Check that ``tau`` respects ``+`` and ``*`` on ``{0..bound}``."""
        bound = self.size ** 2 if bound is None else bound
        bad = []
        if self.tau(0) != self.zero or self.tau(1) != self.one:
            bad.append("tau(0) != zero or tau(1) != one")
        for a, b in itertools.product(range(bound + 1), repeat=2):
            if self.tau(a + b) != self.add(self.tau(a), self.tau(b)):
                bad.append(f"tau(a+b) != tau(a)+tau(b) at ({a}, {b})")
            if self.tau(a * b) != self.mul(self.tau(a), self.tau(b)):
                bad.append(f"tau(a*b) != tau(a)*tau(b) at ({a}, {b})")
        return bad


def capped(k: int) -> FiniteSemiring:
    """``{0..k}`` with ``min(a+b, k)`` and ``min(a*b, k)``."""
    if k < 0:
        raise InputError("capped semiring needs k >= 0")
    return FiniteSemiring(f"capped:{k}", k + 1,
                          lambda a, b: min(a + b, k), lambda a, b: min(a * b, k),
                          0, min(1, k))


def cyclic(c: int) -> FiniteSemiring:
    """Integers modulo ``c``."""
    if c < 1:
        raise InputError("cyclic semiring needs c >= 1")
    return FiniteSemiring(f"cyclic:{c}", c, lambda a, b: (a + b) % c, lambda a, b: (a * b) % c, 0, 1 % c)


def from_tables(add: Sequence[Sequence[int]], mul: Sequence[Sequence[int]],
                zero: int = 0, one: int = 1, name: str = "table") -> FiniteSemiring:
    """User-defined semiring given by operation tables; the axioms are checked."""
    n = len(add)
    if len(mul) != n or any(len(r) != n for r in add) or any(len(r) != n for r in mul):
        raise InputError("operation tables must both be square of the same size")
    add_t = tuple(tuple(r) for r in add)
    mul_t = tuple(tuple(r) for r in mul)
    R = FiniteSemiring(name, n, lambda a, b: add_t[a][b], lambda a, b: mul_t[a][b], zero, one)
    bad = R.axiom_violations()
    if bad:
        raise InputError(f"not a semiring: {bad[0]}")
    return R


def parse_semiring(spec: str) -> FiniteSemiring:
    """``"capped:k"`` or ``"cyclic:c"``."""
    kind, _, arg = spec.partition(":")
    try:
        n = int(arg)
    except ValueError:
        raise InputError(f"bad semiring spec {spec!r}") from None
    if kind == "capped":
        return capped(n)
    if kind == "cyclic":
        return cyclic(n)
    raise InputError(f"unknown semiring kind {kind!r}")
