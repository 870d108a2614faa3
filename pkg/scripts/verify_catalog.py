"""Check every catalog group's word-problem machine against its oracle."""
from __future__ import annotations

import argparse
import time

from multipass.catalog import CATALOG
from multipass.groups import build_wp
from multipass.oracles import oracle_for
from multipass.specs import alphabet_of
from multipass.verify import default_jobs, verify


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-len", type=int, default=6)
    ap.add_argument("--jobs", type=int, default=default_jobs())
    ap.add_argument("names", nargs="*", help="catalog entries (default: all)")
    args = ap.parse_args(argv)
    failed = 0
    for name in args.names or sorted(CATALOG):
        spec = CATALOG[name]()
        start = time.perf_counter()
        m = build_wp(spec)
        report = verify(m, oracle_for(spec).is_identity, args.max_len, jobs=args.jobs,
                        machine_id=f"WP({name})", oracle_id="oracle", alphabet=alphabet_of(spec))
        failed += not report.ok
        bound = ""
        if report.bound is not None:
            bound = f" bound {'ok' if report.bound.ok else 'VIOLATED'} (max steps/(n+1) {report.bound.max_ratio:.1f}," \
                    f" slope {report.bound.constants.slope})"
        print(f"{name:20s} passes {m.passes}  states {len(m.states):4d}  words {report.words_checked:7d}  "
              f"disagreements {len(report.disagreements)}{bound}  {time.perf_counter() - start:.1f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
