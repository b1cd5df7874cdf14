"""Compile a corpus of PORC functions on the unary counter and check the values.

    python scripts/porc_corpus.py tests/data/porc_corpus.json --n-max 40
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from sharpfa.automaton import unary_counter
from sharpfa.closures import porc_compose
from sharpfa.porc import PorcFunction

DEFAULT = Path(__file__).resolve().parent.parent / "tests" / "data" / "porc_corpus.json"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpus", nargs="?", default=str(DEFAULT), help="JSON list of PORC descriptions")
    ap.add_argument("--n-max", type=int, default=30)
    args = ap.parse_args()

    corpus = json.loads(Path(args.corpus).read_text())
    counter = unary_counter("1")
    bad = 0
    print("name\toffset\tperiod\tstates\tagrees\tseconds")
    for i, spec in enumerate(corpus):
        start = time.perf_counter()
        phi = PorcFunction.from_json_dict(spec)
        M = porc_compose(counter, phi)
        ok = all(M("1" * n) == phi(n) for n in range(args.n_max + 1))
        bad += not ok
        name = spec.get("name", f"#{i}")
        print(f"{name}\t{phi.offset}\t{phi.period}\t{len(M.states)}\t{ok}\t{time.perf_counter() - start:.2f}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
