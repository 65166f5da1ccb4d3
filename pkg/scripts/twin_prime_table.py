#!/usr/bin/env python3
"""Twin-pair table: exact Lambda(f) Lambda(f+a) sums against the singular
series prediction, across a degree sweep.

    python3 scripts/twin_prime_table.py [--q 3^2] [--a 1] [--dmax 7]
"""

import argparse

from ffmobius import field_new, parse_poly
from ffmobius.experiments import twin_count


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", default="3^2")
    ap.add_argument("--a", default="1")
    ap.add_argument("--dmin", type=int, default=2)
    ap.add_argument("--dmax", type=int, default=7)
    ap.add_argument("--trunc", type=int, default=4)
    args = ap.parse_args()
    if "^" in args.q:
        p, k = (int(v) for v in args.q.split("^"))
    else:
        p, k = int(args.q), 1
    ctx = field_new(p, k)
    a = parse_poly(ctx, args.a)
    print("d,pair_sum,prime_pairs,reference,ratio")
    for d in range(args.dmin, args.dmax + 1):
        rep = twin_count(ctx, d, a, trunc=min(d, args.trunc))
        print(f"{d},{rep.value},{rep.details['prime_pairs']},{float(rep.reference):.6f},{rep.ratio:.6f}")


if __name__ == "__main__":
    main()
