"""``fa``: build, evaluate, audit and transform weighted automata from the shell.

Exit codes: 0 success, 1 negative verdict (rejected, FAIL, inconclusive),
2 input error, 3 resource limit.  ``-`` stands for stdin or stdout.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import automaton as fa
from . import closures
from .binomial import parse_polynomial
from .errors import ContractError, InputError, ResourceLimitError, using_limits
from .growth import verify_classification
from .multivariate import build_poly_closure, decide_closure_poly
from .porc import PorcFunction

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _alphabet(text: str | None, default: Sequence[str]) -> tuple:
    if not text:
        return tuple(default)
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _write(M: fa.WeightedAutomaton, path: str, matrices: bool = False) -> None:
    fa.dump(M, path, include_matrices=matrices)


def cmd_gen(args) -> int:
    kind, _, arg = args.kind.partition(":")
    if kind == "counter":
        M = fa.unary_counter(args.symbol or "1")
    elif kind == "doubler":
        M = fa.unary_doubler(args.symbol or "1")
    elif kind == "binary":
        M = fa.binary_value(_alphabet(args.alphabet, ("0", "1")))
    elif kind == "letter":
        if not arg:
            raise InputError("use letter:SYMBOL")
        M = fa.letter_counter(_alphabet(args.alphabet, sorted({arg, "a", "b"})), arg)
    elif kind == "const":
        try:
            c = int(arg)
        except ValueError:
            raise InputError("use const:C with a natural number C") from None
        M = fa.constant(c, _alphabet(args.alphabet, ("a", "b")))
    else:
        raise InputError(f"unknown generator {args.kind!r}")
    _write(M, args.output, args.matrices)
    return EXIT_OK


def cmd_eval(args) -> int:
    M = fa.load(args.file)
    print(fa.evaluate(M, args.word))
    return EXIT_OK


def cmd_audit(args) -> int:
    data = fa.read_json_text(fa.read_text(args.file))
    M = fa.from_json_dict(data)
    form = fa.matrix_form_from_json(data) or fa.to_matrix_form(M)
    checked = 0
    for w in fa.words(M.alphabet, args.max_len):
        fast = fa.evaluate_matrix_form(form, w)
        slow = fa.count_paths_bruteforce(M, w)
        checked += 1
        if fast != slow:
            shown = "".join(w) if all(len(a) == 1 for a in M.alphabet) else ",".join(w)
            print("FAIL")
            print(f"word {shown!r}: matrix form gives {fast}, path enumeration gives {slow}")
            return EXIT_NEGATIVE
    print("PASS")
    print(f"{checked} words up to length {args.max_len}")
    return EXIT_OK


def _need(value, flag: str, op: str):
    if value is None:
        raise InputError(f"apply {op} needs {flag}")
    return value


def cmd_apply(args) -> int:
    Ms = [fa.load(p) for p in args.inputs]
    op = args.op
    arity = {"add": 2, "hadamard": 2}.get(op, 1)
    if op == "poly":
        phi = parse_polynomial(_need(args.poly, "--poly", op), nvars=len(Ms))
        R = build_poly_closure(phi, Ms, args.const_bound)
    else:
        if len(Ms) != arity:
            raise InputError(f"apply {op} takes {arity} input file(s), got {len(Ms)}")
        M = Ms[0]
        if op == "add":
            R = closures.add(*Ms)
        elif op == "hadamard":
            R = closures.hadamard(*Ms)
        elif op == "sub":
            R = closures.sub_const(M, _need(args.c, "--c", op))
        elif op == "clamp":
            R = closures.clamp(M, _need(args.c, "--c", op))
        elif op == "indicator":
            R = closures.indicator(M, args.rel, _need(args.c, "--c", op))
        elif op == "div":
            R = closures.div_const(M, _need(args.c, "--c", op))
        elif op == "mod":
            R = closures.mod_indicator(M, _need(args.c, "--c", op), _need(args.d, "--d", op))
        elif op == "binom":
            R = closures.binom_const(M, _need(args.c, "--c", op))
        elif op == "porc":
            spec = fa.read_json_text(fa.read_text(_need(args.porc, "--porc", op)))
            R = closures.porc_compose(M, PorcFunction.from_json_dict(spec))
        else:  # pragma: no cover - argparse restricts choices
            raise InputError(f"unknown operation {op!r}")
    _write(R, args.output)
    return EXIT_OK


def cmd_compile_porc(args) -> int:
    spec = fa.read_json_text(fa.read_text(args.porc))
    phi = PorcFunction.from_json_dict(spec)
    M = fa.load(args.input) if args.input else fa.unary_counter(args.symbol or "1")
    _write(closures.porc_compose(M, phi), args.output)
    return EXIT_OK


def cmd_decide(args) -> int:
    phi = parse_polynomial(args.poly)
    d = decide_closure_poly(phi, args.const_bound)
    print("\n".join(d.lines()))
    return EXIT_OK if d.accepted else EXIT_NEGATIVE


def cmd_classify(args) -> int:
    data = fa.read_json_text(fa.read_text(args.file))
    A = data.get("matrix") if isinstance(data, dict) else data
    if not isinstance(A, list):
        raise InputError("expected a JSON matrix (list of rows) or {\"matrix\": [...]}")
    rep = verify_classification(A, args.vertex, args.horizon)
    print(rep.verdict)
    print("values: " + " ".join(map(str, rep.values)))
    if not rep.ok:
        print("FAIL")
        for p in rep.problems:
            print(p)
        return EXIT_NEGATIVE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fa", description=__doc__.splitlines()[0])
    ap.add_argument("--max-states", type=int, help="state limit for constructions")
    ap.add_argument("--oracle-budget", type=int, help="maximum number of enumerated computations")
    ap.add_argument("--const-bound", type=int, help="largest constant checked explicitly by decide")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a named automaton")
    p.add_argument("kind", help="counter | doubler | binary | letter:SYM | const:C")
    p.add_argument("--alphabet", help="comma-separated symbols")
    p.add_argument("--symbol", help="symbol of the unary automata (default 1)")
    p.add_argument("--matrices", action="store_true", help="also write the matrix form")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="evaluate an automaton on a word")
    p.add_argument("file")
    p.add_argument("word", nargs="?", default="")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("audit", help="compare the matrix evaluator with path enumeration")
    p.add_argument("file")
    p.add_argument("--max-len", type=int, default=4)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("apply", help="apply a closure operation")
    p.add_argument("op", choices=["add", "hadamard", "sub", "clamp", "indicator", "div", "mod",
                                  "binom", "porc", "poly"])
    p.add_argument("inputs", nargs="+")
    p.add_argument("--c", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--rel", default="=", choices=["=", "<=", ">="])
    p.add_argument("--poly")
    p.add_argument("--porc", help="PORC description (JSON file)")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("compile-porc", help="automaton for a PORC function of the unary counter")
    p.add_argument("porc")
    p.add_argument("--input", help="automaton to compose with instead of the unary counter")
    p.add_argument("--symbol")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_compile_porc)

    p = sub.add_parser("decide", help="is a polynomial a closure property?")
    p.add_argument("poly")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("classify", help="growth class of a diagonal entry of A^n")
    p.add_argument("file")
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--horizon", type=int, default=20)
    p.set_defaults(func=cmd_classify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    limits = {k: v for k, v in (("max_states", args.max_states), ("oracle_budget", args.oracle_budget),
                                 ("const_bound", args.const_bound)) if v is not None}
    try:
        with using_limits(**limits):
            return args.func(args)
    except ResourceLimitError as exc:
        print(f"fa: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ContractError as exc:
        print(f"fa: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except InputError as exc:
        print(f"fa: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
