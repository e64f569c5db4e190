#!/usr/bin/env python3
"""Correlation of positive/negative far-difference summand counts vs n.

Prints one row per (n, interval) with the gap to -(21-2phi)/(29+2phi).
"""
import argparse

from zeckstats.fardiff import INTERVALS, TARGET_CORRELATION, correlation, joint_counts, joint_moments


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", nargs="+", type=int, default=list(range(8, 33, 2)))
    args = ap.parse_args()

    print("n,interval,size,mean_plus,mean_minus,correlation,gap")
    for n in args.n:
        for interval in INTERVALS:
            t = joint_counts(n, interval)
            m = joint_moments(t)
            r = correlation(t)
            print(f"{n},{interval},{t.total},{float(m['mean_plus']):.15g},"
                  f"{float(m['mean_minus']):.15g},{r:.15g},{r - TARGET_CORRELATION:.3g}")


if __name__ == "__main__":
    main()
