"""Parikh image of the BS(1, n^2) identity words of shape t+ b t^-1+ b^-1+."""
from __future__ import annotations

import argparse

from multipass.oracles import BS_PATTERN, bs_matrix_eval, iter_parikh_lines, parikh_image, zhnn_is_identity


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2, help="matrix parameter; the group is BS(1, n^2)")
    ap.add_argument("--max-len", type=int, default=21)
    args = ap.parse_args(argv)
    q = args.n * args.n
    rewriting = parikh_image(lambda w: zhnn_is_identity(w, 1, q), ("b", "b^-1", "t", "t^-1"),
                             BS_PATTERN, args.max_len)
    matrices = parikh_image(lambda w: bs_matrix_eval(w, args.n).is_identity(),
                            ("b", "b^-1", "t", "t^-1"), BS_PATTERN, args.max_len)
    print(f"BS(1,{q}), words of length <= {args.max_len}, counts of (b, b^-1, t, t^-1):")
    for line in iter_parikh_lines(rewriting):
        print(" ", line)
    print("matrix backend agrees:", rewriting == matrices)
    return 0 if rewriting == matrices else 1


if __name__ == "__main__":
    raise SystemExit(main())
