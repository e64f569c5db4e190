"""Exact summand-count distributions over ``[H_n, H_{n+1})``.

``count_dp`` is the workhorse: a backward transfer over the cascade states
where each state carries a polynomial in the digit sum (a list of exact
ints, index = number of summands).  ``count_exhaustive`` decomposes every
integer in the interval and is kept as the oracle.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .decomposition import FORBIDDEN, check_scale, greedy_digits_batch, transitions
from .errors import (
    DegenerateDistribution,
    EmptyTable,
    WindowTooSmall,
)
from .recurrence import RecurrenceSpec, generate


@dataclass(frozen=True)
class CountTable:
    spec: RecurrenceSpec
    n: int
    counts: dict  # k -> p_{n,k}, nonzero entries only, sorted by k

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def support(self) -> list[int]:
        return list(self.counts)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(["n", "k", "count"])
        for k, c in self.counts.items():
            writer.writerow([self.n, k, str(c)])
        return buf.getvalue()


def _table(spec, n, counts) -> CountTable:
    return CountTable(spec, n, {k: counts[k] for k in sorted(counts) if counts[k]})


CHUNK = 1 << 20


def _tally(args) -> dict:
    spec, lo, hi, n = args
    table = generate(spec, n + 1)
    digits = greedy_digits_batch(np.arange(lo, hi, dtype=np.int64), table, n)
    sums = np.bincount(digits.sum(axis=1))
    return {k: int(c) for k, c in enumerate(sums) if c}


def count_exhaustive(spec: RecurrenceSpec, n: int, workers: int = 1) -> CountTable:
    """Decompose every ``N`` in ``[H_n, H_{n+1})`` and tally summand counts.

    The interval is cut into disjoint chunks whose tallies are summed, in a
    process pool when ``workers > 1``.
    """
    check_scale(spec, n)
    table = generate(spec, n + 1)
    lo, hi = table[n], table[n + 1]
    chunks = [(spec, a, min(a + CHUNK, hi), n) for a in range(lo, hi, CHUNK)]
    merged: dict = {}
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_tally, chunks))
    else:
        parts = map(_tally, chunks)
    for part in parts:
        for k, c in part.items():
            merged[k] = merged.get(k, 0) + c
    return _table(spec, n, merged)


def _shift_add(acc: list, poly: list, shift: int) -> None:
    need = len(poly) + shift
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for i, v in enumerate(poly):
        if v:
            acc[i + shift] += v


def count_dp_series(spec: RecurrenceSpec, n_max: int) -> Iterator[CountTable]:
    """Yield ``CountTable`` for n = 1, 2, ..., n_max in one sweep.

    ``tails[j]`` is the digit-sum polynomial of all legal continuations of
    the current length starting in cascade state ``j``; prefixing the
    leading digit gives the table for the next ``n``.
    """
    rows = transitions(spec)
    L = len(rows)
    tails = [[1] for _ in range(L)]  # length-0 continuations
    for n in range(1, n_max + 1):
        head: list = []
        for a in range(1, len(rows[0])):
            nxt = rows[0][a]
            if nxt != FORBIDDEN:
                _shift_add(head, tails[nxt], a)
        yield _table(spec, n, dict(enumerate(head)))
        if n == n_max:
            break
        new_tails = []
        for j in range(L):
            acc: list = []
            for a, nxt in enumerate(rows[j]):
                if nxt != FORBIDDEN:
                    _shift_add(acc, tails[nxt], a)
            new_tails.append(acc)
        tails = new_tails


def count_dp(spec: RecurrenceSpec, n: int) -> CountTable:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    for table in count_dp_series(spec, n):
        pass
    return table


@dataclass(frozen=True)
class MomentSummary:
    n: int
    mean: Fraction
    variance: Fraction

    @property
    def mean_float(self) -> float:
        return float(self.mean)

    @property
    def variance_float(self) -> float:
        return float(self.variance)


def moments(t: CountTable) -> MomentSummary:
    total = t.total
    if not total:
        raise EmptyTable(f"count table for n={t.n} is empty")
    s1 = sum(k * c for k, c in t.counts.items())
    s2 = sum(k * k * c for k, c in t.counts.items())
    mean = Fraction(s1, total)
    return MomentSummary(t.n, mean, Fraction(s2, total) - mean * mean)


def moments_float(t: CountTable) -> tuple[float, float]:
    """Float pipeline, independent of the Fraction one: normalize, then sum."""
    total = t.total
    ks = np.array(list(t.counts), dtype=float)
    w = np.array([c / total for c in t.counts.values()])
    mean = float(np.dot(w, ks))
    return mean, float(np.dot(w, (ks - mean) ** 2))


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    residual: float  # max absolute residual


def fit_line(xs, ys) -> LineFit:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < 2:
        raise WindowTooSmall("need at least two points to fit a line")
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(np.max(np.abs(ys - (slope * xs + intercept))))
    return LineFit(float(slope), float(intercept), resid)


def window_moments(spec: RecurrenceSpec, n_min: int, n_max: int) -> list[MomentSummary]:
    if n_max - n_min < 5:
        raise WindowTooSmall(f"window [{n_min}, {n_max}] spans fewer than 5 steps")
    if n_min < 1:
        raise WindowTooSmall(f"window must start at n >= 1, got {n_min}")
    return [moments(t) for t in count_dp_series(spec, n_max) if t.n >= n_min]


def lekkerkerker_slope(
    spec: RecurrenceSpec, n_min: int, n_max: int, summaries: Optional[list] = None
) -> LineFit:
    """Least-squares slope of the mean summand count against ``n``."""
    summaries = summaries or window_moments(spec, n_min, n_max)
    return fit_line([m.n for m in summaries], [m.mean_float for m in summaries])


def variance_slope(
    spec: RecurrenceSpec, n_min: int, n_max: int, summaries: Optional[list] = None
) -> LineFit:
    summaries = summaries or window_moments(spec, n_min, n_max)
    return fit_line([m.n for m in summaries], [m.variance_float for m in summaries])


def normal_cdf(z: float) -> float:
    # erfc keeps full relative accuracy in the lower tail
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def ks_distance_weights(
    support, weights, convention: str = "midpoint", mean=None, var=None
) -> float:
    """KS distance of a discrete law (support ascending, weights summing to 1)
    from the normal with the same mean and variance.

    ``midpoint`` evaluates the empirical CDF halfway between consecutive
    support points, which is free of the lattice jump.  ``sup`` is the
    classical supremum over both one-sided limits at every atom.
    """
    xs = [float(x) for x in support]
    ws = [float(w) for w in weights]
    if mean is None:
        mean = sum(w * x for w, x in zip(ws, xs))
        var = sum(w * (x - mean) ** 2 for w, x in zip(ws, xs))
    mean, var = float(mean), float(var)
    if var <= 0:
        raise DegenerateDistribution("variance is zero; nothing to standardize")
    sd = math.sqrt(var)
    worst = 0.0
    cdf = 0.0
    if convention == "midpoint":
        for i in range(len(xs) - 1):
            cdf += ws[i]
            z = ((xs[i] + xs[i + 1]) / 2 - mean) / sd
            worst = max(worst, abs(cdf - normal_cdf(z)))
    elif convention == "sup":
        for x, w in zip(xs, ws):
            phi = normal_cdf((x - mean) / sd)
            worst = max(worst, abs(cdf - phi))
            cdf += w
            worst = max(worst, abs(cdf - phi))
    else:
        raise ValueError(f"unknown KS convention {convention!r}")
    return worst


def ks_distance(t: CountTable, convention: str = "midpoint") -> float:
    if not t.counts:
        raise EmptyTable(f"count table for n={t.n} is empty")
    total = t.total
    if len(t.counts) < 2:
        raise DegenerateDistribution(f"point mass at k={t.support[0]}")
    m = moments(t)
    weights = [c / total for c in t.counts.values()]  # correctly rounded big-int division
    return ks_distance_weights(t.support, weights, convention, m.mean, m.variance)


def count_tables_csv(tables) -> str:
    return "n,k,count\n" + "".join(t.to_csv(header=False) for t in tables)
