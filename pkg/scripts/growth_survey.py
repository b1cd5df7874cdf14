"""Frequency of the diagonal growth classes over random matrices, with verification.

    python scripts/growth_survey.py --count 1000 --max-size 6 --max-entry 1
"""
from __future__ import annotations

import argparse
import random
import sys
from collections import Counter

from sharpfa.growth import verify_classification


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--max-size", type=int, default=5)
    ap.add_argument("--max-entry", type=int, default=1)
    ap.add_argument("--density", type=float, default=0.4)
    ap.add_argument("--horizon", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    counts: Counter = Counter()
    failures = []
    for _ in range(args.count):
        k = rng.randint(1, args.max_size)
        A = [[rng.randint(1, args.max_entry) if rng.random() < args.density else 0 for _ in range(k)]
             for _ in range(k)]
        v = rng.randrange(k)
        rep = verify_classification(A, v, max(args.horizon, 2 * k))
        counts[str(rep.verdict)] += 1
        if not rep.ok:
            failures.append((A, v, rep.problems))
    for verdict, n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        print(f"{verdict}\t{n}")
    print(f"verification failures: {len(failures)}")
    for A, v, problems in failures[:5]:
        print(f"  A={A} v={v}: {problems[0]}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
