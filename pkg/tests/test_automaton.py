from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import AB, automata, random_automaton
from sharpfa.automaton import (
    WeightedAutomaton, all_computations, binary_value, computation_weight, constant, count_paths_bruteforce,
    dumps, evaluate, evaluate_matrix_form, from_matrix_form, letter_counter, loads, simplify, to_matrix_form,
    unary_counter, unary_doubler, words,
)
from sharpfa.errors import InputError, ResourceLimitError, using_limits


def test_named_automata():
    assert evaluate(unary_counter(), "111") == 3
    assert evaluate(unary_counter(), "1111") == 4
    assert evaluate(unary_doubler(), "1111") == 16
    assert evaluate(unary_doubler(), "") == 1
    assert evaluate(binary_value(), "101") == 5
    assert evaluate(binary_value(), "0011") == 3
    assert evaluate(binary_value(("0", "1", "a")), "1a0") == 2
    M = letter_counter(AB, "a")
    assert [M(w) for w in ("abab", "", "bbb")] == [2, 0, 0]
    assert count_paths_bruteforce(unary_counter(), "11") == 2


def test_unary_shapes():
    U, D = unary_counter(), unary_doubler()
    assert len(U.states) == 2 and len(D.states) == 1
    assert D.trans == {("S", "1", "S"): 2}


def test_empty_word_is_init_dot_out():
    M = WeightedAutomaton(("p", "q"), AB, {}, {"p": 2, "q": 3}, {"p": 5, "q": 7})
    assert evaluate(M, "") == 2 * 5 + 3 * 7 == count_paths_bruteforce(M, "")


def test_constant():
    assert constant(0, AB)("abba") == 0
    assert constant(5, AB)("abba") == 5
    form = to_matrix_form(constant(4, AB))
    assert form.init == [4] and form.matrices["a"] == [[1]] and form.final == [1]


def test_binary_matrix_form():
    form = to_matrix_form(binary_value())
    assert form.init == [1, 0]
    assert form.matrices["1"] == [[1, 1], [0, 2]]
    assert form.matrices["0"] == [[1, 0], [0, 2]]
    assert form.final == [0, 1]


def test_matrix_round_trip():
    form = to_matrix_form(binary_value())
    again = to_matrix_form(from_matrix_form(form.init, form.matrices, form.final))
    assert again == form


def test_unknown_symbol():
    with pytest.raises(InputError):
        evaluate(binary_value(), "102")
    with pytest.raises(InputError):
        count_paths_bruteforce(binary_value(), "2")
    with pytest.raises(InputError):
        letter_counter(AB, "c")


def test_bad_automata_rejected():
    with pytest.raises(InputError):
        WeightedAutomaton(("p",), AB, {("p", "c", "p"): 1})
    with pytest.raises(InputError):
        WeightedAutomaton(("p",), AB, {}, {"r": 1})
    with pytest.raises(InputError):
        WeightedAutomaton(("p",), AB, {}, {"p": -1})


def test_budget():
    M = random_automaton(random.Random(0), 4)
    with using_limits(oracle_budget=100):
        with pytest.raises(ResourceLimitError):
            count_paths_bruteforce(M, "aaaa")
    assert count_paths_bruteforce(M, "aaaa", budget=4 ** 5) == evaluate(M, "aaaa")


def test_zero_init_gives_zero():
    M = WeightedAutomaton(("p",), AB, {("p", "a", "p"): 3}, {}, {"p": 1})
    assert all(count_paths_bruteforce(M, w) == 0 for w in words(AB, 3))


def test_computation_weight_enumeration_agrees():
    M = random_automaton(random.Random(3), 3, max_weight=3)
    for w in words(AB, 3):
        total = sum(computation_weight(M, w, P) for P in all_computations(M, w))
        assert total == evaluate(M, w)


@given(automata(max_states=4, max_weight=3))
def test_evaluators_agree(M):
    for w in words(M.alphabet, 4):
        assert evaluate(M, w) == count_paths_bruteforce(M, w)
        assert evaluate_matrix_form(to_matrix_form(M), w) == evaluate(M, w)


@given(automata(max_states=3, max_weight=3))
def test_simplify_preserves_function(M):
    S = simplify(M)
    assert S.is_simple
    for w in words(M.alphabet, 3):
        assert S(w) == M(w)


@given(automata(max_states=2, max_weight=2))
def test_full_simplify_product(M):
    S = simplify(M, full=True)
    assert S.is_simple
    for w in words(M.alphabet, 3):
        assert S(w) == M(w)


def test_simplify_examples():
    loop = WeightedAutomaton(("q",), ("s",), {("q", "s", "q"): 3}, {"q": 1}, {"q": 1})
    assert simplify(loop)("ss") == 9
    lone = WeightedAutomaton(("q",), ("s",), {}, {"q": 2}, {"q": 1})
    assert simplify(lone)("") == 2
    U = unary_counter()
    assert simplify(U) is U


@given(automata(max_states=3, max_weight=40))
def test_growth_bound(M):
    # |Q|^(n+1) computations, each a product of n+2 weights
    q, top = len(M.states), M.max_weight
    for w in words(M.alphabet, 3):
        assert M(w) <= q ** (len(w) + 1) * top ** (len(w) + 2)


@given(automata(max_states=3, max_weight=2**70))
def test_json_round_trip(M):
    again = loads(dumps(M))
    assert [str(q) for q in M.states] == list(again.states)
    assert again.same_weights(M) if M.states == again.states else True
    for w in words(M.alphabet, 2):
        assert again(w) == M(w)
    assert dumps(again) == dumps(M)


def test_json_big_weights_are_strings():
    M = WeightedAutomaton(("p",), ("a",), {("p", "a", "p"): 2**80}, {"p": 1}, {"p": 1})
    assert f'"{2**80}"' in dumps(M)
    assert loads(dumps(M))("aa") == 2**160


def test_json_errors():
    with pytest.raises(InputError):
        loads("{")
    with pytest.raises(InputError):
        loads('{"alphabet": ["a"]}')
    with pytest.raises(InputError):
        loads('{"alphabet": ["a"], "states": ["p"], "init": {"p": "x"}}')


@given(st.integers(0, 256))
def test_binary_value_reads_binary(n):
    assert binary_value()(format(n, "b")) == n
