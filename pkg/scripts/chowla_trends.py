#!/usr/bin/env python3
"""Shifted-Mobius correlation sums across a degree sweep: the ratio to the
trivial bound q^d should fall off once the field is large enough.

    python3 scripts/chowla_trends.py [--q 3^2] [--pairs "1;T;T+1"] [--dmax 8]
"""

import argparse

from ffmobius import Poly, field_new, parse_poly
from ffmobius.experiments import chowla_sum


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", default="3^2")
    ap.add_argument("--pairs", default="1;T", help="shifts a (M = 1), ';'-separated")
    ap.add_argument("--dmin", type=int, default=2)
    ap.add_argument("--dmax", type=int, default=7)
    args = ap.parse_args()
    if "^" in args.q:
        p, k = (int(v) for v in args.q.split("^"))
    else:
        p, k = int(args.q), 1
    ctx = field_new(p, k)
    one = Poly.one(ctx)
    pairs = [(parse_poly(ctx, s), one) for s in args.pairs.split(";")]
    print("d,value,ratio")
    for d in range(args.dmin, args.dmax + 1):
        rep = chowla_sum(ctx, d, pairs)
        print(f"{d},{rep.value},{rep.ratio:.6f}")


if __name__ == "__main__":
    main()
