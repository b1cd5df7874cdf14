"""Acceptance checks, one per criterion; each prints a PASS/FAIL line with its runtime.

Run with pytest (lines appear in the terminal summary) or directly:
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import contextlib
import inspect
import itertools
import json
import math
import random
import sys
import time
import traceback
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from helpers import random_automaton  # noqa: E402
from sharpfa import automaton as fa  # noqa: E402
from sharpfa import closures  # noqa: E402
from sharpfa.binomial import (  # noqa: E402
    BinomialPoly, MultiBinomialPoly, dominating_terms, interpolate_nonneg, nonneg_certificate,
    parse_polynomial, shift_binomial_basis, shift_binomial_basis_multi,
)
from sharpfa.errors import ContractError, InputError  # noqa: E402
from sharpfa.growth import DiagonalClass, classify_diagonal, verify_classification  # noqa: E402
from sharpfa.multivariate import (  # noqa: E402
    ACCEPTED, REJECTED, build_poly_closure, decide_closure_poly, evaluate_poly_on,
)
from sharpfa.porc import PorcFunction  # noqa: E402

CORPUS = json.loads((Path(__file__).parent / "data" / "porc_corpus.json").read_text())


@contextlib.contextmanager
def criterion(n: int, limit: float | None):
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None and elapsed > limit:
            detail = f" (over the {limit:g} s limit)"
            raise AssertionError(f"criterion {n} took {elapsed:.2f} s")
        status = "PASS"
    except BaseException as exc:
        detail = detail or f" ({type(exc).__name__}: {str(exc)[:120]})"
        raise
    finally:
        line = f"criterion {n}: {status} {time.perf_counter() - start:.2f}s{detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_criterion_01_evaluators_agree():
    with criterion(1, 10):
        rng = random.Random(1)
        for _ in range(50):
            M = random_automaton(rng, rng.randint(1, 4), max_weight=3)
            for w in fa.words(M.alphabet, 5):
                assert fa.evaluate(M, w) == fa.count_paths_bruteforce(M, w), (M, w)


def test_criterion_02_simplify_preserves_values():
    with criterion(2, 10):
        rng = random.Random(2)
        for _ in range(30):
            M = random_automaton(rng, rng.randint(1, 3), max_weight=3)
            S = fa.simplify(M)
            assert S.is_simple
            for w in fa.words(M.alphabet, 4):
                assert fa.evaluate(S, w) == fa.evaluate(M, w), (M, w)


def _closure_cases(f: int, g: int, c: int) -> dict[str, int]:
    return {
        "add": f + g, "hadamard": f * g, "sub": max(f - c, 0), "clamp": min(f, c),
        "eq": int(f == c), "le": int(f <= c), "ge": int(f >= c), "div": f // c,
        "mod": int(f % c == 1 % c), "binom": math.comb(f, c),
    }


def test_criterion_03_closure_suite():
    with criterion(3, 60):
        rng = random.Random(3)
        for trial in range(40):
            M = fa.simplify(random_automaton(rng, rng.randint(1, 3)))
            N = fa.simplify(random_automaton(rng, rng.randint(1, 3)))
            c = 1 + trial % 3
            built = {
                "add": closures.add(M, N), "hadamard": closures.hadamard(M, N),
                "sub": closures.sub_const(M, c), "clamp": closures.clamp(M, c),
                "eq": closures.indicator(M, "=", c), "le": closures.indicator(M, "<=", c),
                "ge": closures.indicator(M, ">=", c), "div": closures.div_const(M, c),
                "mod": closures.mod_indicator(M, c, 1 % c), "binom": closures.binom_const(M, c),
            }
            mods = [closures.mod_indicator(M, c, d) for d in range(c)]
            for w in fa.words(M.alphabet, 4):
                f, g = fa.count_paths_bruteforce(M, w), fa.count_paths_bruteforce(N, w)
                want = _closure_cases(f, g, c)
                for name, A in built.items():
                    assert A(w) == want[name], (name, c, w)
                assert built["clamp"](w) + built["sub"](w) == f
                assert c * built["div"](w) + sum(d * mods[d](w) for d in range(c)) == f


def test_criterion_04_figure_automata():
    with criterion(4, 5):
        counter, doubler = fa.unary_counter("1"), fa.unary_doubler("1")
        for n in range(21):
            assert counter("1" * n) == n and doubler("1" * n) == 2 ** n
        form = fa.to_matrix_form(fa.binary_value())
        assert form.init == [1, 0] and form.final == [0, 1]
        assert form.matrices == {"0": [[1, 0], [0, 2]], "1": [[1, 1], [0, 2]]}
        B = fa.binary_value()
        for n in range(257):
            w = format(n, "b")
            assert B(w) == n and fa.evaluate_matrix_form(form, w) == n


def test_criterion_05_porc_compiler():
    with criterion(5, 30):
        assert len(CORPUS) >= 10
        worked = PorcFunction.polynomial(["1", "-3/2", "1/2"])
        counter = fa.unary_counter("1")
        W = closures.porc_compose(counter, worked)
        assert all(W("1" * n) == math.comb(n - 1, 2) for n in range(1, 31))
        for spec in CORPUS:
            phi = PorcFunction.from_json_dict(spec)
            M = closures.porc_compose(counter, phi)
            assert [M("1" * n) for n in range(31)] == [phi(n) for n in range(31)], spec["name"]


def _random_positive_binomial(rng: random.Random) -> BinomialPoly:
    r = rng.randint(0, 5)
    return BinomialPoly([rng.randint(-20, 20) for _ in range(r)] + [rng.randint(1, 20)])


def _random_positive_multi(rng: random.Random) -> MultiBinomialPoly:
    while True:
        coeffs = {(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-6, 6) for _ in range(rng.randint(1, 5))}
        phi = MultiBinomialPoly(2, coeffs)
        dom = dominating_terms(phi)
        if dom and all(a > 0 for a in dom.values()):
            return phi


def test_criterion_06_basis_lemmas():
    with criterion(6, 10):
        rng = random.Random(6)
        for _ in range(20):
            phi = _random_positive_binomial(rng)
            shifted = shift_binomial_basis(phi)
            for b, c, i in shifted.terms:
                assert isinstance(b, int) and isinstance(c, int) and b >= 0 and c >= 0
            assert all(shifted(x) == phi(x) for x in range(16))
        example = shift_binomial_basis(BinomialPoly([1, -1, 1]))
        assert example.terms == ((1, 1, 2),) and str(example) == "C(x-1,2)"
        for _ in range(20):
            phi = _random_positive_multi(rng)
            shifted = shift_binomial_basis_multi(phi)
            for a, c, d in shifted.terms:
                assert a >= 0 and c >= 0
            assert all(shifted(p) == phi(p) for p in itertools.product(range(9), repeat=2))


def test_criterion_07_multivariate():
    with criterion(7, 60):
        d = decide_closure_poly(parse_polynomial("(x1-x2)^2"))
        assert d.verdict == REJECTED and d.term == (1, 1)
        counters = [fa.letter_counter("ab", "a"), fa.letter_counter("ab", "b")]
        for text, arity in [("x1*x2", 2), ("(x-1)^2", 1), ("x1*x2 + B(x1,2)", 2)]:
            phi = parse_polynomial(text, nvars=arity)
            assert decide_closure_poly(phi).verdict == ACCEPTED, text
            M = build_poly_closure(phi, counters[:arity])
            for w in fa.words("ab", 4):
                args = (w.count("a"), w.count("b"))[:arity]
                assert M(w) == evaluate_poly_on(phi, args), (text, w)


def test_criterion_08_growth_trichotomy():
    with criterion(8, 20):
        fixed = [([[0, 1], [0, 0]], DiagonalClass("Zero")), ([[0, 1], [1, 0]], DiagonalClass("Periodic", 2)),
                 ([[2]], DiagonalClass("Exponential", 1))]
        for A, cls in fixed:
            assert classify_diagonal(A, 0) == cls
            assert verify_classification(A, 0, 20).ok
        rng = random.Random(8)
        for _ in range(100):
            k = rng.randint(1, 5)
            A = [[rng.randint(0, 1) for _ in range(k)] for _ in range(k)]
            v = rng.randrange(k)
            rep = verify_classification(A, v, 20)
            assert rep.ok, (A, v, rep.problems)


def test_criterion_09_interpolation():
    with criterion(9, 10):
        rng = random.Random(9)
        for _ in range(50):
            targets = [rng.randint(0, 10) for _ in range(rng.randint(1, 6))]
            q = interpolate_nonneg(targets)
            assert q.is_integer_valued()
            assert [q(n) for n in range(len(targets))] == targets
            B = nonneg_certificate(q)
            assert B is not None
            assert all(q(n) >= 0 for n in range(B + 1))
            far = 10 * max(B, len(targets))
            assert all(q(n) >= 0 for n in rng.sample(range(B + 1, far + 1), min(200, far - B)))


def test_criterion_10_no_difference_operation():
    with criterion(10, None):
        binary_ops = []
        for module in (closures, fa):
            for name, fn in vars(module).items():
                if name.startswith("_") or not inspect.isfunction(fn) or fn.__module__ != module.__name__:
                    continue
                assert not any(k in name.lower() for k in ("diff", "minus", "subtract")), name
                params = inspect.signature(fn).parameters
                if "Ms" in params:
                    binary_ops.append(name)
        assert sorted(binary_ops) == ["add", "hadamard"]
        M = fa.letter_counter("ab", "a")
        for bad in (lambda: closures.sub_const(M, M), lambda: closures.clamp(M, M)):
            try:
                bad()
            except InputError:
                pass
            else:
                raise AssertionError("a second automaton was accepted where a constant is required")
        for text in ("(x1-x2)^2", "x1 - x2"):
            assert decide_closure_poly(parse_polynomial(text)).verdict == REJECTED
        try:
            build_poly_closure(parse_polynomial("(x1-x2)^2"), [M, fa.letter_counter("ab", "b")])
        except ContractError:
            pass
        else:
            raise AssertionError("(x1-x2)^2 was built")
        from sharpfa.cli import main
        assert main(["decide", "(x1-x2)^2"]) == 1


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except Exception:
                failed += 1
                traceback.print_exc(limit=2)
    sys.exit(1 if failed else 0)
