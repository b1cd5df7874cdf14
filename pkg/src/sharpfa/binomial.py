"""Integer-valued polynomials in the (shifted) binomial basis.

Univariate polynomials are ``sum_i a_i * C(x, i)``; multivariate ones are
``sum_d a_d * prod_j C(x_j, d_j)``.  A polynomial is integer-valued exactly
when these coefficients are integers.  All arithmetic is exact
(``int``/``Fraction``).
"""
from __future__ import annotations

import ast
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, InputError

Number = int | Fraction
Degree = tuple  # tuple[int, ...]


def _norm(x: Number) -> Number:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def binom(n: int, k: int) -> int:
    """``C(n, k)`` as the polynomial ``n(n-1)...(n-k+1)/k!``; ``n`` may be negative."""
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    return (-1) ** k * math.comb(k - n - 1, k)


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def _falling_coeffs(k: int) -> tuple[int, ...]:
    """Monomial coefficients of ``x(x-1)...(x-k+1)``."""
    coeffs = [1]
    for j in range(k):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= j * c
        coeffs = nxt
    return tuple(coeffs)


def monomial_to_binomial(coeffs: Sequence[Number]) -> list[Number]:
    """``sum c_n x^n`` -> ``sum a_k C(x, k)`` via ``x^n = sum_k S(n,k) k! C(x,k)``."""
    out = [Fraction(0)] * len(coeffs)
    for n, c in enumerate(coeffs):
        if c:
            for k in range(n + 1):
                out[k] += Fraction(c) * _stirling2(n, k) * math.factorial(k)
    return [_norm(a) for a in out]


def binomial_to_monomial(coeffs: Sequence[Number]) -> list[Number]:
    out = [Fraction(0)] * len(coeffs)
    for k, a in enumerate(coeffs):
        if a:
            f = math.factorial(k)
            for j, s in enumerate(_falling_coeffs(k)):
                out[j] += Fraction(a) * s / f
    return [_norm(c) for c in out]


def shifted_binomial_coeffs(c: int, r: int) -> list[int]:
    """Coefficients of ``C(x - c, r)`` in the basis ``C(x, i)`` (Chu-Vandermonde)."""
    return [binom(-c, r - i) for i in range(r + 1)]


def _strip(coeffs: Iterable[Number]) -> tuple[Number, ...]:
    coeffs = [_norm(a) for a in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


# ------------------------------------------------------------- univariate

@dataclass(frozen=True)
class BinomialPoly:
    """``sum_i coeffs[i] * C(x, i)``; the zero polynomial has no coefficients."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def from_monomial(cls, coeffs: Sequence[Number]) -> BinomialPoly:
        return cls(monomial_to_binomial(coeffs))

    def to_monomial(self) -> tuple:
        return tuple(binomial_to_monomial(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Number:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integer_valued(self) -> bool:
        return all(Fraction(a).denominator == 1 for a in self.coeffs)

    def common_denominator(self) -> int:
        return math.lcm(1, *(Fraction(a).denominator for a in self.coeffs))

    def __call__(self, x: int) -> Number:
        return _norm(sum(Fraction(a) * binom(x, i) for i, a in enumerate(self.coeffs)))

    def __add__(self, other: BinomialPoly) -> BinomialPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return BinomialPoly([x + y for x, y in zip(a, b)])

    def __neg__(self) -> BinomialPoly:
        return BinomialPoly([-a for a in self.coeffs])

    def __sub__(self, other: BinomialPoly) -> BinomialPoly:
        return self + (-other)

    def scale(self, k: Number) -> BinomialPoly:
        return BinomialPoly([k * a for a in self.coeffs])

    def __str__(self) -> str:
        return _format_terms(((a, (i,)) for i, a in enumerate(self.coeffs)), ("x",)) or "0"


@dataclass(frozen=True)
class ShiftedBinomialPoly:
    """``sum b * C(x - c, i)`` over ``terms = ((b, c, i), ...)`` with ``b, c >= 0``."""

    terms: tuple

    def __call__(self, x: int) -> int:
        return sum(b * binom(x - c, i) for b, c, i in self.terms)

    @property
    def max_shift(self) -> int:
        return max((c for _, c, _ in self.terms), default=0)

    def to_binomial(self) -> BinomialPoly:
        acc = BinomialPoly()
        for b, c, i in self.terms:
            acc = acc + BinomialPoly(shifted_binomial_coeffs(c, i)).scale(b)
        return acc

    def __str__(self) -> str:
        parts = []
        for b, c, i in self.terms:
            arg = f"x-{c}" if c else "x"
            parts.append(f"{b}*C({arg},{i})" if b != 1 else f"C({arg},{i})")
        return " + ".join(parts) or "0"


def to_binomial_basis(monomial_coeffs: Sequence[Number]) -> BinomialPoly:
    """Exact change of basis from ``sum c_n x^n`` (ascending degree)."""
    return BinomialPoly.from_monomial(monomial_coeffs)


def shift_binomial_basis(phi: BinomialPoly) -> ShiftedBinomialPoly:
    """Rewrite ``phi`` with a positive leading coefficient as ``sum b_i C(x - c_i, i)``, ``b_i, c_i >= 0``.

    The top term ``b C(x, r)`` is peeled off with the smallest shift ``c``
    for which the remainder is zero or again has a positive leading
    coefficient.  The remainder's coefficient of ``C(x, r-1)`` is
    ``a_{r-1} + b c``, so that ``c`` is ``c0 = max(ceil(-a_{r-1} / b), 0)`` or
    ``c0 + 1``; both are at most ``max(1 - a_{r-1}, 0)``.
    """
    if not phi.is_integer_valued():
        raise InputError("shift_binomial_basis needs integer binomial coefficients")
    if phi.is_zero() or phi.leading <= 0:
        raise InputError("shift_binomial_basis needs a positive leading coefficient")
    terms = []
    rest = phi
    while not rest.is_zero():
        r, b = rest.degree, rest.leading
        if r == 0:
            terms.append((b, 0, 0))
            break
        c = max(-(rest.coeffs[r - 1] // b), 0)
        cand = rest - BinomialPoly(shifted_binomial_coeffs(c, r)).scale(b)
        if not (cand.is_zero() or cand.leading > 0):
            c += 1
            cand = rest - BinomialPoly(shifted_binomial_coeffs(c, r)).scale(b)
        terms.append((b, c, r))
        rest = cand
    return ShiftedBinomialPoly(tuple(terms))


# ----------------------------------------------------------- multivariate

def _dominates(d: Degree, e: Degree) -> bool:
    return all(x >= y for x, y in zip(d, e))


@dataclass(frozen=True)
class MultiBinomialPoly:
    """``sum_d coeffs[d] * prod_j C(x_j, d_j)`` in ``nvars`` variables."""

    nvars: int
    coeffs: Mapping[Degree, Number]

    def __post_init__(self):
        clean = {}
        for d, a in self.coeffs.items():
            d = tuple(d)
            if len(d) != self.nvars or any(x < 0 for x in d):
                raise InputError(f"bad degree vector {d} for {self.nvars} variables")
            a = _norm(a)
            if a:
                clean[d] = a
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __hash__(self):
        return hash((self.nvars, tuple(self.coeffs.items())))

    @classmethod
    def from_monomial(cls, nvars: int, mono: Mapping[Degree, Number]) -> MultiBinomialPoly:
        acc: dict[Degree, Fraction] = {}
        for exps, c in mono.items():
            factors = [monomial_to_binomial([0] * e + [1]) for e in exps]
            for combo in itertools.product(*(list(enumerate(f)) for f in factors)):
                coef = Fraction(c)
                for _, a in combo:
                    coef *= a
                if coef:
                    d = tuple(k for k, _ in combo)
                    acc[d] = acc.get(d, 0) + coef
        return cls(nvars, acc)

    @classmethod
    def univariate(cls, phi: BinomialPoly) -> MultiBinomialPoly:
        return cls(1, {(i,): a for i, a in enumerate(phi.coeffs)})

    def to_monomial(self) -> dict[Degree, Number]:
        acc: dict[Degree, Fraction] = {}
        for d, a in self.coeffs.items():
            factors = [binomial_to_monomial([0] * k + [1]) for k in d]
            for combo in itertools.product(*(list(enumerate(f)) for f in factors)):
                coef = Fraction(a)
                for _, c in combo:
                    coef *= c
                if coef:
                    e = tuple(k for k, _ in combo)
                    acc[e] = acc.get(e, 0) + coef
        return {e: _norm(c) for e, c in sorted(acc.items()) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integer_valued(self) -> bool:
        return all(Fraction(a).denominator == 1 for a in self.coeffs.values())

    def degree_in(self, j: int) -> int:
        return max((d[j] for d in self.coeffs), default=0)

    def __call__(self, *point: int) -> Number:
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise InputError(f"expected {self.nvars} arguments, got {len(point)}")
        total = Fraction(0)
        for d, a in self.coeffs.items():
            term = Fraction(a)
            for x, k in zip(point, d):
                term *= binom(x, k)
                if not term:
                    break
            total += term
        return _norm(total)

    def substitute(self, values: Mapping[int, int]) -> MultiBinomialPoly:
        """Replace ``x_j`` by ``values[j]``; substituted coordinates get degree 0."""
        acc: dict[Degree, Fraction] = {}
        for d, a in self.coeffs.items():
            coef = Fraction(a)
            for j, v in values.items():
                coef *= binom(v, d[j])
            if coef:
                e = tuple(0 if j in values else k for j, k in enumerate(d))
                acc[e] = acc.get(e, 0) + coef
        return MultiBinomialPoly(self.nvars, acc)

    def __add__(self, other: MultiBinomialPoly) -> MultiBinomialPoly:
        acc = dict(self.coeffs)
        for d, a in other.coeffs.items():
            acc[d] = acc.get(d, 0) + a
        return MultiBinomialPoly(self.nvars, acc)

    def __neg__(self) -> MultiBinomialPoly:
        return MultiBinomialPoly(self.nvars, {d: -a for d, a in self.coeffs.items()})

    def __sub__(self, other: MultiBinomialPoly) -> MultiBinomialPoly:
        return self + (-other)

    def scale(self, k: Number) -> MultiBinomialPoly:
        return MultiBinomialPoly(self.nvars, {d: k * a for d, a in self.coeffs.items()})

    def with_nvars(self, m: int) -> MultiBinomialPoly:
        """Pad with unused variables (or drop trailing unused ones)."""
        if m < self.nvars and any(any(d[m:]) for d in self.coeffs):
            raise InputError(f"polynomial uses more than {m} variables")
        return MultiBinomialPoly(m, {(tuple(d) + (0,) * m)[:m]: a for d, a in self.coeffs.items()})

    def __str__(self) -> str:
        names = tuple(f"x{j + 1}" for j in range(self.nvars))
        return _format_terms(((a, d) for d, a in self.coeffs.items()), names) or "0"


def dominating_terms(phi: MultiBinomialPoly) -> dict[Degree, Number]:
    """Nonzero terms whose degree vector is maximal under the componentwise order."""
    support = list(phi.coeffs)
    return {d: phi.coeffs[d] for d in support
            if not any(e != d and _dominates(e, d) for e in support)}


def shifted_product_coeffs(c: int, d: Degree) -> dict[Degree, int]:
    """``prod_j C(x_j - c, d_j)`` in the product binomial basis."""
    factors = [shifted_binomial_coeffs(c, k) for k in d]
    out = {}
    for combo in itertools.product(*(list(enumerate(f)) for f in factors)):
        coef = 1
        for _, a in combo:
            coef *= a
        if coef:
            out[tuple(i for i, _ in combo)] = coef
    return out


@dataclass(frozen=True)
class ShiftedMultiPoly:
    """``sum a * prod_j C(x_j - c, d_j)`` over ``terms = ((a, c, d), ...)``."""

    nvars: int
    terms: tuple

    def __call__(self, *point: int) -> int:
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        return sum(a * math.prod(binom(x - c, k) for x, k in zip(point, d)) for a, c, d in self.terms)

    @property
    def max_shift(self) -> int:
        return max((c for _, c, _ in self.terms), default=0)

    def to_binomial(self) -> MultiBinomialPoly:
        acc = MultiBinomialPoly(self.nvars, {})
        for a, c, d in self.terms:
            acc = acc + MultiBinomialPoly(self.nvars, shifted_product_coeffs(c, d)).scale(a)
        return acc


def _all_dominating_positive(phi: MultiBinomialPoly) -> bool:
    return all(a > 0 for a in dominating_terms(phi).values())


SHIFT_SEARCH = 4096


def shift_binomial_basis_multi(phi: MultiBinomialPoly) -> ShiftedMultiPoly:
    """Rewrite ``phi`` as ``sum a' prod_j C(x_j - c, d_j)`` with ``a', c >= 0``.

    Repeatedly removes the dominating term ``a * prod C(x_j, d_j)`` with the
    largest degree vector (by total degree, then lexicographically), shifted by
    ``c``.  Every ``c > -a_j / a``, for the coefficients ``a_j`` of the terms
    one below ``d``, leaves a remainder with positive dominating terms; the
    least such natural number is ``bound``.  The smallest admissible ``c`` is
    searched below ``bound`` (up to ``SHIFT_SEARCH`` candidates), otherwise
    ``bound`` itself is used.
    """
    if not phi.is_integer_valued():
        raise InputError("shift_binomial_basis_multi needs integer binomial coefficients")
    if not _all_dominating_positive(phi):
        raise ContractError("every dominating term must have a positive coefficient")
    terms = []
    rest = phi
    while not rest.is_zero():
        dom = dominating_terms(rest)
        d = max(dom, key=lambda e: (sum(e), e))
        a = dom[d]
        below = [rest.coeffs.get(d[:j] + (d[j] - 1,) + d[j + 1:], 0) for j in range(len(d)) if d[j]]
        bound = max([math.floor(Fraction(-aj, a)) + 1 for aj in below] + [0])

        def remainder(c):
            return rest - MultiBinomialPoly(rest.nvars, shifted_product_coeffs(c, d)).scale(a)

        for c in range(min(bound, SHIFT_SEARCH)):
            cand = remainder(c)
            if _all_dominating_positive(cand):
                break
        else:
            c, cand = bound, remainder(bound)
        terms.append((a, c, d))
        rest = cand
    return ShiftedMultiPoly(phi.nvars, tuple(terms))


# ------------------------------------------------------------ positivity

def cauchy_bound(monomial: Sequence[Number]) -> int:
    """Integer ``B`` such that every real root of the polynomial is ``< B``."""
    coeffs = list(_strip(monomial))
    if len(coeffs) <= 1:
        return 0
    lead = abs(Fraction(coeffs[-1]))
    return math.floor(1 + max(abs(Fraction(c)) / lead for c in coeffs[:-1])) + 1


def nonneg_certificate(q: BinomialPoly) -> int | None:
    """Return ``B`` with ``q(n) >= 0`` for every natural ``n``, certified as
    ``q > 0`` beyond ``B`` (root bound, positive leading coefficient) and by
    exhaustive evaluation on ``0..B``.  ``None`` if ``q`` is negative somewhere.
    """
    if q.is_zero():
        return 0
    if q.leading < 0:
        return None
    B = cauchy_bound(q.to_monomial())
    if any(q(n) < 0 for n in range(B + 1)):
        return None
    return B


def interpolate_nonneg(values: Sequence[int]) -> BinomialPoly:
    """Integer-valued ``q`` with ``q(n) = values[n]`` and ``q >= 0`` on all naturals.

    Newton-style: ``q_{i+1} = q_i + (c_{i+1} - q_i(i+1)) C(x, i+1)``, then the
    least ``alpha`` for which ``q_N + alpha C(x, N+1)`` is certified nonnegative.
    """
    if not values:
        raise InputError("need at least one value")
    if any(not isinstance(v, int) or v < 0 for v in values):
        raise InputError("interpolation targets must be natural numbers")
    q = BinomialPoly((values[0],))
    for i in range(1, len(values)):
        unit = [0] * i + [1]
        q = q + BinomialPoly(unit).scale(values[i] - q(i))
    top = BinomialPoly([0] * len(values) + [1])
    alpha = 0
    while nonneg_certificate(q + top.scale(alpha)) is None:
        alpha += 1
    return q + top.scale(alpha)


# ---------------------------------------------------------------- parsing

def _format_terms(terms, names) -> str:
    parts = []
    for a, d in terms:
        if not a:
            continue
        factors = [f"C({names[j]},{k})" for j, k in enumerate(d) if k]
        mag = abs(a)
        body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
        parts.append(("- " if a < 0 else "+ ") + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else ("-" + text[2:] if text else "")


class _Mono:
    """Sparse monomial-basis polynomial used while parsing."""

    def __init__(self, terms: Mapping[tuple, Fraction]):
        self.terms = {e: c for e, c in terms.items() if c}

    @staticmethod
    def _pad(e: tuple, n: int) -> tuple:
        return e + (0,) * (n - len(e))

    def __add__(self, other: _Mono) -> _Mono:
        n = max([len(e) for e in itertools.chain(self.terms, other.terms)] + [0])
        acc: dict = {}
        for src in (self.terms, other.terms):
            for e, c in src.items():
                e = self._pad(e, n)
                acc[e] = acc.get(e, 0) + c
        return _Mono(acc)

    def __neg__(self) -> _Mono:
        return _Mono({e: -c for e, c in self.terms.items()})

    def __mul__(self, other: _Mono) -> _Mono:
        n = max([len(e) for e in itertools.chain(self.terms, other.terms)] + [0])
        acc: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(self._pad(e1, n), self._pad(e2, n)))
                acc[e] = acc.get(e, 0) + c1 * c2
        return _Mono(acc)

    def constant(self) -> Fraction | None:
        if all(not any(e) for e in self.terms):
            return sum(self.terms.values(), Fraction(0))
        return None


def _var_index(name: str) -> int | None:
    if name == "x":
        return 0
    if name.startswith("x") and name[1:].isdigit() and int(name[1:]) >= 1:
        return int(name[1:]) - 1
    return None


def _to_mono(node: ast.AST) -> _Mono:
    if isinstance(node, ast.Expression):
        return _to_mono(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return _Mono({(): Fraction(node.value)})
    if isinstance(node, ast.Name):
        j = _var_index(node.id)
        if j is None:
            raise InputError(f"unknown variable {node.id!r}; use x, x1, x2, ...")
        return _Mono({(0,) * j + (1,): Fraction(1)})
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        inner = _to_mono(node.operand)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        left, right = _to_mono(node.left), _to_mono(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left + (-right)
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            c = right.constant()
            if not c:
                raise InputError("division is only allowed by nonzero constants")
            return left * _Mono({(): 1 / c})
        if isinstance(node.op, ast.Pow):
            k = right.constant()
            if k is None or k.denominator != 1 or k < 0:
                raise InputError("exponents must be natural number constants")
            acc = _Mono({(): Fraction(1)})
            for _ in range(int(k)):
                acc = acc * left
            return acc
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id in ("B", "C", "binom") and len(node.args) == 2 and not node.keywords:
        arg = _to_mono(node.args[0])
        k = _to_mono(node.args[1]).constant()
        if k is None or k.denominator != 1 or k < 0:
            raise InputError("the lower index of B(., k) must be a natural number")
        acc = _Mono({(): Fraction(1)})
        for i in range(int(k)):
            acc = acc * (arg + _Mono({(): Fraction(-i)}))
        return acc * _Mono({(): Fraction(1, math.factorial(int(k)))})
    raise InputError(f"unsupported syntax in polynomial: {ast.dump(node)}")


def parse_polynomial(text: str, nvars: int | None = None) -> MultiBinomialPoly:
    """Parse ``"x1^2*x2 - 3*x1 + 1"`` or ``"2*B(x1,2)*B(x2,1) - B(x1,1)"``.

    Variables are ``x`` (same as ``x1``), ``x1``, ``x2``, ...; ``^`` and ``**``
    both mean power.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
    mono = _to_mono(tree)
    used = max([len(e) for e in mono.terms] + [1])
    if nvars is None:
        nvars = used
    elif any(any(e[nvars:]) for e in mono.terms):
        raise InputError(f"polynomial {text!r} uses more than {nvars} variables")
    terms = {(_Mono._pad(e, max(nvars, len(e))))[:nvars]: c for e, c in mono.terms.items()}
    return MultiBinomialPoly.from_monomial(nvars, terms)
