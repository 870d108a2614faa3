"""Report observed step counts against k*C*B^2*(n+1) on long inputs."""
from __future__ import annotations

import argparse
import random

from multipass.automaton import completed, run
from multipass.catalog import CATALOG
from multipass.groups import build_wp
from multipass.verify import bound_constants


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=64)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    bad = 0
    for name in sorted(CATALOG):
        m = completed(build_wp(CATALOG[name]()))
        c = bound_constants(m)
        worst = 0.0
        for n in range(args.max_n + 1):
            for _ in range(args.samples):
                w = tuple(rng.choice(m.input_alphabet) for _ in range(n))
                steps = run(m, w, budget=c.limit(n) + 1).steps_total
                worst = max(worst, steps / (n + 1))
                bad += steps > c.limit(n)
        print(f"{name:20s} k={c.k} C={c.C} B={c.B} slope={c.slope:6d}  observed steps/(n+1) <= {worst:.2f}")
    print("violations:", bad)
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
