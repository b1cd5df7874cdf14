"""State counts of the closure constructions on random simple automata.

    python scripts/construction_sizes.py --states 1 2 3 --consts 1 2 3 --trials 10
"""
from __future__ import annotations

import argparse
import random
import statistics
import time

from sharpfa import automaton as fa
from sharpfa import closures
from sharpfa.errors import ResourceLimitError, using_limits

OPS = {
    "sub": lambda M, c: closures.sub_const(M, c),
    "clamp": lambda M, c: closures.clamp(M, c),
    "indicator": lambda M, c: closures.indicator(M, "=", c),
    "div": lambda M, c: closures.div_const(M, c),
    "mod": lambda M, c: closures.mod_indicator(M, c, 0),
    "binom": lambda M, c: closures.binom_const(M, c),
    "binom-divide": lambda M, c: closures.binom_const(M, c, method="divide"),
}


def random_simple(rng: random.Random, n: int, alphabet=("a", "b"), density: float = 0.5) -> fa.WeightedAutomaton:
    states = tuple(range(n))
    trans = {(p, a, q): 1 for p in states for a in alphabet for q in states if rng.random() < density}
    init = {q: 1 for q in states if rng.random() < density}
    out = {q: 1 for q in states if rng.random() < density}
    return fa.WeightedAutomaton(states, tuple(alphabet), trans, init, out)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--consts", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--ops", nargs="+", default=list(OPS), choices=list(OPS))
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--max-states", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("op\tinput_states\tc\tmean_states\tmax_states\tover_limit\tseconds")
    for op in args.ops:
        for n in args.states:
            for c in args.consts:
                rng = random.Random(args.seed)
                sizes, over = [], 0
                start = time.perf_counter()
                for _ in range(args.trials):
                    M = random_simple(rng, n)
                    try:
                        with using_limits(max_states=args.max_states):
                            sizes.append(len(OPS[op](M, c).states))
                    except ResourceLimitError:
                        over += 1
                mean = f"{statistics.mean(sizes):.1f}" if sizes else "-"
                top = max(sizes) if sizes else "-"
                print(f"{op}\t{n}\t{c}\t{mean}\t{top}\t{over}\t{time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    main()
