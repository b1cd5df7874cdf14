from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import AB, automata, matches, oracle_table
from sharpfa.automaton import WeightedAutomaton, constant, letter_counter, unary_counter, words
from sharpfa.binomial import BinomialPoly, shift_binomial_basis, to_binomial_basis
from sharpfa.closures import (
    add, binom_const, clamp, div_const, hadamard, indicator, mod_indicator, patch_finite, poly_nonneg,
    porc_compose, scale, sub_const,
)
from sharpfa.errors import InputError, ResourceLimitError, using_limits
from sharpfa.porc import PorcFunction

A_COUNT = letter_counter(AB, "a")
B_COUNT = letter_counter(AB, "b")
WEIGHTED = automata(max_states=2, max_weight=3)


def check(M, f_table, op):
    """``M`` computes ``op(f(w))`` on every word of the table."""
    bad = matches(M, {w: op(v) for w, v in f_table.items()})
    assert bad is None, bad


def test_letter_counter_examples():
    assert add(A_COUNT, B_COUNT)("aab") == 3
    assert hadamard(A_COUNT, B_COUNT)("aab") == 2
    assert sub_const(A_COUNT, 1)("aa") == 1
    assert div_const(A_COUNT, 1)("aaab") == 3


def test_identities_of_constants():
    f = oracle_table(A_COUNT, 4)
    check(add(A_COUNT, constant(0, AB)), f, lambda v: v)
    check(hadamard(A_COUNT, constant(1, AB)), f, lambda v: v)
    check(binom_const(A_COUNT, 0), f, lambda v: 1)
    check(binom_const(A_COUNT, 1), f, lambda v: v)
    check(mod_indicator(A_COUNT, 1, 0), f, lambda v: 1)
    check(clamp(A_COUNT, 0), f, lambda v: 0)


@given(automata(), automata())
def test_add_and_hadamard(F, G):
    f, g = oracle_table(F, 4), oracle_table(G, 4)
    assert matches(add(F, G), {w: f[w] + g[w] for w in f}) is None
    assert matches(hadamard(F, G), {w: f[w] * g[w] for w in f}) is None
    assert matches(add(G, F), {w: f[w] + g[w] for w in f}) is None
    assert matches(hadamard(G, F), {w: f[w] * g[w] for w in f}) is None


@given(automata(max_states=2), automata(max_states=2), automata(max_states=2))
def test_add_associates(F, G, H):
    left, right = add(add(F, G), H), add(F, add(G, H))
    for w in words(AB, 3):
        assert left(w) == right(w) == F(w) + G(w) + H(w)


@given(WEIGHTED, st.integers(0, 4))
def test_scale(F, k):
    check(scale(F, k), oracle_table(F, 3), lambda v: k * v)


@given(automata(), st.integers(0, 3))
def test_sub_and_clamp_reconstruct(F, c):
    f = oracle_table(F, 4)
    S, C = sub_const(F, c), clamp(F, c)
    check(S, f, lambda v: max(v - c, 0))
    check(C, f, lambda v: min(v, c))
    check(add(S, C), f, lambda v: v)


@given(WEIGHTED, st.integers(0, 3))
def test_sub_and_clamp_on_weighted_inputs(F, c):
    f = oracle_table(F, 3)
    check(sub_const(F, c), f, lambda v: max(v - c, 0))
    check(clamp(F, c), f, lambda v: min(v, c))


@given(automata(), st.sampled_from(["=", "<=", ">="]), st.integers(0, 3))
def test_indicator(F, rel, c):
    test = {"=": lambda v: v == c, "<=": lambda v: v <= c, ">=": lambda v: v >= c}[rel]
    check(indicator(F, rel, c), oracle_table(F, 4), lambda v: int(test(v)))


def test_indicators_partition_bounded_values():
    f = oracle_table(A_COUNT, 4)
    total = add(*(indicator(A_COUNT, "=", c) for c in range(5)))
    check(total, f, lambda v: 1)


@given(automata(), st.integers(1, 4))
def test_div_mod_reconstruct(F, c):
    f = oracle_table(F, 4)
    D = div_const(F, c)
    check(D, f, lambda v: v // c)
    mods = [mod_indicator(F, c, d) for d in range(c)]
    for d, M in enumerate(mods):
        check(M, f, lambda v, d=d: int(v % c == d))
    check(add(scale(D, c), *(scale(M, d) for d, M in enumerate(mods))), f, lambda v: v)


def test_div_mod_examples():
    f = oracle_table(A_COUNT, 5)
    check(div_const(A_COUNT, 3), f, lambda v: v // 3)
    seven = constant(7, AB)
    assert div_const(seven, 2)("ab") == 3
    assert mod_indicator(seven, 2, 1)("") == 1


@given(automata(), st.integers(0, 3))
def test_binom(F, c):
    check(binom_const(F, c), oracle_table(F, 3), lambda v: math.comb(v, c))


@given(automata(max_states=2))
def test_binom_by_division(F):
    check(binom_const(F, 2, method="divide"), oracle_table(F, 3), lambda v: math.comb(v, 2))


@pytest.mark.parametrize("method", ["sorted", "divide"])
def test_binom_examples(method):
    check(binom_const(A_COUNT, 3, method), oracle_table(A_COUNT, 6), lambda v: math.comb(v, 3))
    assert binom_const(constant(4, AB), 2, method)("") == 6
    check(binom_const(A_COUNT, 1, method), oracle_table(A_COUNT, 4), lambda v: v)


def test_parameter_errors():
    with pytest.raises(InputError):
        div_const(A_COUNT, 0)
    with pytest.raises(InputError):
        mod_indicator(A_COUNT, 3, 3)
    with pytest.raises(InputError):
        indicator(A_COUNT, "<", 1)
    with pytest.raises(InputError):
        add(A_COUNT, unary_counter())
    with pytest.raises(InputError):
        hadamard(A_COUNT, unary_counter())
    with pytest.raises(InputError):
        sub_const(A_COUNT, -1)
    with using_limits(max_binom=2):
        with pytest.raises(ResourceLimitError):
            binom_const(A_COUNT, 3)
    with using_limits(max_states=10):
        with pytest.raises(ResourceLimitError):
            binom_const(A_COUNT, 4)
    with pytest.raises(InputError):
        binom_const(A_COUNT, 2, method="preorder")


def test_patch_finite():
    f = oracle_table(A_COUNT, 4)
    check(patch_finite(A_COUNT, {}, None), f, lambda v: v)
    check(patch_finite(A_COUNT, {0: 9}), f, lambda v: 9 if v == 0 else v)
    check(patch_finite(A_COUNT, [2, 0, 5], lambda M: scale(M, 3)), f, lambda v: [2, 0, 5][v] if v < 3 else 3 * v)
    with pytest.raises(InputError):
        patch_finite(A_COUNT, {1: 3})


def test_patch_corrects_clamped_shift():
    # C(max(x-1, 0), 2) differs from C(x-1, 2) only at x = 0, where C(-1, 2) = 1
    phi = BinomialPoly((1, -1, 1))
    tail = binom_const(sub_const(A_COUNT, 1), 2)
    M = patch_finite(A_COUNT, [phi(0)], tail)
    check(M, oracle_table(A_COUNT, 4), lambda v: phi(v))


def test_poly_examples():
    example = to_binomial_basis([1, Fraction(-3, 2), Fraction(1, 2)])
    U = unary_counter()
    assert poly_nonneg(U, example)("111") == 1
    neg = poly_nonneg(U, to_binomial_basis([0, -1]))
    assert [neg("1" * n) for n in range(6)] == [0] * 6
    check(poly_nonneg(A_COUNT, to_binomial_basis([1, -3, 1])), oracle_table(A_COUNT, 5),
          lambda v: max(v * v - 3 * v + 1, 0))
    with pytest.raises(InputError):
        poly_nonneg(U, to_binomial_basis([0, Fraction(1, 2)]))


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_poly_nonneg_random(coeffs):
    phi = BinomialPoly(coeffs)
    U = unary_counter()
    M = poly_nonneg(U, phi)
    assert [M("1" * n) for n in range(9)] == [max(phi(n), 0) for n in range(9)]


def test_porc_examples():
    U = unary_counter()
    parity = porc_compose(U, PorcFunction(0, 2, ((0,), (1,))))
    assert [parity("1" * n) for n in range(13)] == [n % 2 for n in range(13)]
    pairs = porc_compose(U, PorcFunction.polynomial((0, Fraction(-1, 2), Fraction(1, 2))))
    assert pairs("111111") == 15
    patched = porc_compose(U, PorcFunction(3, 1, ((0, 1),), (7, 0, 7)))
    assert [patched("1" * n) for n in range(6)] == [7, 0, 7, 3, 4, 5]
    with pytest.raises(InputError):
        porc_compose(U, BinomialPoly((1,)))


def test_shift_used_by_poly_is_exact():
    phi = BinomialPoly((1, -1, 1))
    assert shift_binomial_basis(phi).terms == ((1, 1, 2),)


def test_zero_automaton_inputs():
    Z = WeightedAutomaton((), AB)
    assert indicator(Z, "=", 0)("ab") == 1
    assert mod_indicator(Z, 3, 0)("") == 1
    assert binom_const(Z, 2)("a") == 0
