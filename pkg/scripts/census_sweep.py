#!/usr/bin/env python3
"""Sweep the almost-prime census over growing x and watch eta_hat.

For a fixed admissible (R, c) the count of p <= x with Omega(floor(p^c)) <= R
should stay comparable to x / log^2 x; eta_hat = count * log^2 x / x is the
measured density multiplier.

Usage: python scripts/census_sweep.py [-c 10521/10000] [-R 8] [--max-x 1e6]
"""
import argparse
import json
import math

from pclab import experiments


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-c", default="10521/10000")
    ap.add_argument("-R", type=int, default=8)
    ap.add_argument("--max-x", type=float, default=1e6)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    x = 1000
    while x <= args.max_x:
        r = experiments.almost_prime_census(x, args.c, args.R, jobs=args.jobs)
        sf = experiments.squarefree_census(x, args.c, jobs=args.jobs)
        print(json.dumps({
            "x": x,
            "c": args.c,
            "R": args.R,
            "count": r.count,
            "pi_x": r.pi_x,
            "eta_hat": round(r.eta_hat, 4),
            "squarefree_ratio": round(sf.ratio, 6),
            "x_over_log2x": round(x / math.log(x) ** 2, 1),
        }))
        x *= 10


if __name__ == "__main__":
    main()
