#!/usr/bin/env python3
"""KS distance to the normal law as n grows, both conventions, as CSV."""
import argparse
import sys

from zeckstats.counting import count_dp_series, ks_distance
from zeckstats.recurrence import parse_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--spec", default="1,1")
    ap.add_argument("--n-max", type=int, default=800)
    ap.add_argument("--every", type=int, default=50)
    args = ap.parse_args()

    spec = parse_spec(args.spec)
    print("n,ks_midpoint,ks_sup")
    for t in count_dp_series(spec, args.n_max):
        if t.n % args.every == 0:
            print(f"{t.n},{ks_distance(t):.15g},{ks_distance(t, 'sup'):.15g}")
            sys.stdout.flush()


if __name__ == "__main__":
    main()
