"""Ultimately PORC functions: polynomial on residue classes beyond an offset."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .binomial import BinomialPoly, binomial_to_monomial, cauchy_bound
from .errors import InputError


def shifted_remainder(n: int, N: int, p: int) -> int:
    """``n`` below the offset ``N``, else the least ``k >= N`` with ``k = n (mod p)``."""
    if p < 1:
        raise InputError("period must be at least 1")
    if n < N:
        return n
    return N + (n - N) % p


def _fraction(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise InputError(f"not a number: {x!r}")
    try:
        return Fraction(x) if not isinstance(x, float) else Fraction(str(x))
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {x!r}") from None


def _mono_eval(coeffs: Sequence[Fraction], n: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


@dataclass(frozen=True)
class PorcFunction:
    """``phi(n) = initial_values[n]`` for ``n < offset``, else ``constituents[n % period](n)``.

    Constituents are monomial coefficient lists (ascending degree) with
    rational entries.  ``__post_init__`` validates the description; see
    :meth:`validate` for the checks.
    """

    offset: int
    period: int
    constituents: tuple
    initial_values: tuple = ()
    horizon: int = field(default=64, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.offset, int) or self.offset < 0:
            raise InputError("offset must be a natural number")
        if not isinstance(self.period, int) or self.period < 1:
            raise InputError("period must be a positive integer")
        cons = tuple(tuple(_fraction(c) for c in poly) for poly in self.constituents)
        object.__setattr__(self, "constituents", cons)
        object.__setattr__(self, "initial_values", tuple(self.initial_values))
        self.validate()

    # -- construction helpers
    @classmethod
    def polynomial(cls, coeffs: Sequence, offset: int = 0, initial_values: Sequence[int] = ()) -> PorcFunction:
        return cls(offset, 1, (tuple(coeffs),), tuple(initial_values))

    @classmethod
    def from_binomial(cls, phi: BinomialPoly) -> PorcFunction:
        return cls(0, 1, (tuple(binomial_to_monomial(phi.coeffs)),))

    # -- evaluation
    def constituent(self, i: int) -> BinomialPoly:
        return BinomialPoly.from_monomial(self.constituents[i])

    def __call__(self, n: int) -> int:
        if n < 0:
            raise InputError("PORC functions are evaluated on the naturals")
        if n < self.offset:
            return self.initial_values[n]
        v = _mono_eval(self.constituents[n % self.period], n)
        if v.denominator != 1:
            raise InputError(f"value at {n} is not an integer: {v}")
        return int(v)

    def validate(self) -> None:
        """Raise ``InputError`` unless the description is a well-formed map ``N -> N``.

        Checks the shapes, nonnegative integer initial values, that each
        constituent has a positive leading coefficient (or is zero), and that
        the values are natural numbers up to ``offset + horizon`` and up to a
        root bound of every constituent (past which the sign is fixed).
        """
        if len(self.constituents) != self.period:
            raise InputError(f"need {self.period} constituents, got {len(self.constituents)}")
        if len(self.initial_values) != self.offset:
            raise InputError(f"need {self.offset} initial values, got {len(self.initial_values)}")
        for v in self.initial_values:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InputError(f"initial values must be natural numbers, got {v!r}")
        for i, poly in enumerate(self.constituents):
            nz = [c for c in poly if c]
            if nz and nz[-1] < 0:
                raise InputError(f"constituent {i} has a negative leading coefficient")
        reach = max([self.horizon] + [cauchy_bound(poly) for poly in self.constituents])
        for n in range(self.offset, self.offset + reach + self.period):
            v = _mono_eval(self.constituents[n % self.period], n)
            if v.denominator != 1 or v < 0:
                raise InputError(f"value at n={n} is {v}, not a natural number")

    def common_denominator(self, i: int) -> int:
        """Least ``alpha`` making ``alpha * constituent_i`` integer-valued."""
        return self.constituent(i).common_denominator()

    # -- JSON
    def to_json_dict(self) -> dict:
        return {"offset": self.offset, "period": self.period,
                "constituents": [[str(c) for c in poly] for poly in self.constituents],
                "initial_values": list(self.initial_values)}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> PorcFunction:
        try:
            init = data.get("initial_values", [])
            if isinstance(init, Mapping):
                init = [init[k] for k in sorted(init, key=int)]
            return cls(int(data.get("offset", 0)), int(data.get("period", 1)),
                       tuple(tuple(poly) for poly in data["constituents"]),
                       tuple(int(v) for v in init))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed PORC description: {exc}") from None


@dataclass(frozen=True)
class SumOfProductsPorc:
    """``(n_1..n_m) -> sum_i prod_j summands[i][j](n_j)``."""

    nvars: int
    summands: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(tuple(s) for s in self.summands))
        for s in self.summands:
            if len(s) != self.nvars:
                raise InputError(f"each summand needs {self.nvars} factors, got {len(s)}")

    def __call__(self, *ns: int) -> int:
        if len(ns) != self.nvars:
            raise InputError(f"expected {self.nvars} arguments")
        return sum(math.prod(phi(n) for phi, n in zip(s, ns)) for s in self.summands)

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> SumOfProductsPorc:
        try:
            summands = [tuple(PorcFunction.from_json_dict(d) for d in s) for s in data["summands"]]
            return cls(int(data["nvars"]), tuple(summands))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed sum-of-products description: {exc}") from None
