"""Far-difference (signed Fibonacci) representations.

Every integer is a unique signed sum of Fibonacci numbers ``F_1=1, F_2=2,
F_3=3, F_4=5, ...`` in which consecutive terms of the same sign are at
least 4 indices apart and terms of opposite sign at least 3 apart.

The greedy choice uses the boundary sums ``S_n = F_n + F_{n-4} + ...``:
the leading index of ``N > 0`` is the unique ``n`` with
``S_{n-1} < N <= S_n``.
"""
from __future__ import annotations

import bisect
import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Iterator, Optional

import numpy as np

from .decomposition import EXHAUSTIVE_LIMIT
from .errors import (
    DegenerateMarginal,
    NonDecreasingIndices,
    ScaleTooLarge,
    ValidationError,
)
from .recurrence import FIBONACCI, SequenceTable, generate

PHI = (1 + sqrt(5)) / 2
TARGET_CORRELATION = -(21 - 2 * PHI) / (29 + 2 * PHI)

INTERVALS = ("leading", "fibonacci")


@dataclass(frozen=True)
class SignedDecomposition:
    value: int
    terms: tuple[tuple[int, int], ...] = field(default=())  # (index, sign), index descending

    @property
    def k_plus(self) -> int:
        return sum(1 for _, s in self.terms if s > 0)

    @property
    def k_minus(self) -> int:
        return sum(1 for _, s in self.terms if s < 0)

    def negated(self) -> "SignedDecomposition":
        return SignedDecomposition(-self.value, tuple((i, -s) for i, s in self.terms))

    def text(self) -> str:
        if not self.terms:
            return f"{self.value} = 0"
        parts = []
        for pos, (i, s) in enumerate(self.terms):
            sign = "+" if s > 0 else "-"
            parts.append(f"{sign}F_{i}" if pos == 0 else f"{sign} F_{i}")
        return f"{self.value} = {' '.join(parts)}"

    def record(self) -> dict:
        return {"value": str(self.value), "terms": [[i, s] for i, s in self.terms]}

    def json(self) -> str:
        return json.dumps(self.record())


class FibonacciTables:
    """Growable ``F`` and ``S`` arrays (1-based, stored 0-based)."""

    def __init__(self, n: int = 32):
        self.fib: SequenceTable = generate(FIBONACCI, n)
        self._sums()

    def _sums(self) -> None:
        S = []
        for i, f in enumerate(self.fib.terms):
            S.append(f + (S[i - 4] if i >= 4 else 0))
        self.S = S

    def cover(self, x: int) -> None:
        while self.S[-1] < x:
            self.ensure(2 * len(self.fib))

    def ensure(self, n: int) -> None:
        if len(self.fib) < n:
            self.fib = self.fib.extended(n)
            self._sums()

    def F(self, i: int) -> int:
        return self.fib[i]

    def leading_index(self, x: int) -> int:
        """Unique ``n`` with ``S_{n-1} < x <= S_n`` for ``x >= 1``."""
        self.cover(x)
        return bisect.bisect_left(self.S, x) + 1


_TABLES = FibonacciTables()


def boundary_sum(n: int) -> int:
    """``S_n = F_n + F_{n-4} + ...``; ``S_0 = 0``."""
    if n <= 0:
        return 0
    _TABLES.ensure(n)
    return _TABLES.S[n - 1]


def fardiff_decompose(N: int, table: Optional[SequenceTable] = None) -> SignedDecomposition:
    if table is not None and table.spec != FIBONACCI:
        raise ValidationError(f"far-difference needs the (1,1) table, got spec {table.spec}")
    terms = []
    sign = 1 if N > 0 else -1
    rem = abs(N)
    while rem:
        n = _TABLES.leading_index(rem)
        terms.append((n, sign))
        rem -= _TABLES.F(n)
        if rem < 0:
            rem, sign = -rem, -sign
    return SignedDecomposition(N, tuple(terms))


def signed_value(terms) -> int:
    _TABLES.ensure(max((i for i, _ in terms), default=1))
    return sum(s * _TABLES.F(i) for i, s in terms)


def is_valid_fardiff(d: SignedDecomposition) -> bool:
    terms = d.terms
    for (i, _), (j, _) in zip(terms, terms[1:]):
        if j >= i:
            raise NonDecreasingIndices(f"indices {i} then {j} are not strictly decreasing")
    if any(i < 1 or s not in (1, -1) for i, s in terms):
        return False
    for (i, s), (j, t) in zip(terms, terms[1:]):
        if i - j < (4 if s == t else 3):
            return False
    return True


def enumerate_signed(max_index: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every gap-valid signed term list with indices ``<= max_index`` (incl. empty).

    Brute-force oracle; knows nothing about boundary sums.
    """
    out: list = []

    def walk(limit_same: int, limit_opp: int, last_sign: int):
        yield tuple(out)
        for sign in (1, -1):
            top = limit_same if sign == last_sign else limit_opp
            for i in range(top, 0, -1):
                out.append((i, sign))
                yield from walk(i - 4, i - 3, sign)
                out.pop()

    yield from walk(max_index, max_index, 0)


def signed_count_arrays(upto: int) -> tuple[np.ndarray, np.ndarray]:
    """``(K+, K-)`` of ``fardiff_decompose(m)`` for every ``0 <= m <= upto``.

    The greedy step maps ``m`` in the leading block ``(S_{n-1}, S_n]`` to the
    smaller remainder ``m - F_n``; filling blocks in increasing order lets
    each block read its remainders' counts from earlier entries.
    """
    _TABLES.cover(upto)
    kp = np.zeros(upto + 1, dtype=np.int64)
    km = np.zeros(upto + 1, dtype=np.int64)
    n = 1
    while boundary_sum(n - 1) < upto:
        lo, hi = boundary_sum(n - 1) + 1, min(boundary_sum(n), upto)
        if lo <= hi:
            r = np.arange(lo, hi + 1, dtype=np.int64) - _TABLES.F(n)
            a = np.abs(r)
            pos = r >= 0
            kp[lo : hi + 1] = np.where(pos, kp[a], km[a]) + 1
            km[lo : hi + 1] = np.where(pos, km[a], kp[a])
        n += 1
    return kp, km


def interval_bounds(n: int, interval: str = "leading") -> tuple[int, int]:
    """Half-open ``[lo, hi)`` of the statistics interval for index ``n``."""
    if n < 1:
        raise ValidationError(f"interval index must be >= 1, got {n}")
    if interval == "leading":
        return boundary_sum(n - 1) + 1, boundary_sum(n) + 1
    if interval == "fibonacci":
        tables = generate(FIBONACCI, n + 1)
        return tables[n], tables[n + 1]
    raise ValidationError(f"unknown interval {interval!r}; choose from {INTERVALS}")


@dataclass(frozen=True)
class JointCountTable:
    n: int
    interval: str
    counts: dict  # (k_plus, k_minus) -> count

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(["n", "k_plus", "k_minus", "count"])
        for (p, m), c in self.counts.items():
            writer.writerow([self.n, p, m, str(c)])
        return buf.getvalue()


def joint_counts(
    n: int, interval: str = "leading", limit: int = EXHAUSTIVE_LIMIT
) -> JointCountTable:
    lo, hi = interval_bounds(n, interval)
    if hi - lo > limit:
        raise ScaleTooLarge(hi - lo, limit)
    kp, km = signed_count_arrays(hi - 1)
    kp, km = kp[lo:hi], km[lo:hi]
    width = int(km.max()) + 1
    codes, freq = np.unique(kp * width + km, return_counts=True)
    counts = {(int(c // width), int(c % width)): int(f) for c, f in zip(codes, freq)}
    return JointCountTable(n, interval, counts)


def joint_counts_naive(n: int, interval: str = "leading") -> JointCountTable:
    """Per-integer tally through ``fardiff_decompose``; the small-scale oracle."""
    lo, hi = interval_bounds(n, interval)
    counts: dict = {}
    for N in range(lo, hi):
        d = fardiff_decompose(N)
        key = (d.k_plus, d.k_minus)
        counts[key] = counts.get(key, 0) + 1
    return JointCountTable(n, interval, dict(sorted(counts.items())))


def joint_moments(t: JointCountTable) -> dict:
    """Exact means, variances and covariance of ``(K+, K-)`` as Fractions."""
    total = t.total
    sp = sm = spp = smm = spm = 0
    for (p, m), c in t.counts.items():
        sp += p * c
        sm += m * c
        spp += p * p * c
        smm += m * m * c
        spm += p * m * c
    mp, mm = Fraction(sp, total), Fraction(sm, total)
    return {
        "mean_plus": mp,
        "mean_minus": mm,
        "var_plus": Fraction(spp, total) - mp * mp,
        "var_minus": Fraction(smm, total) - mm * mm,
        "cov": Fraction(spm, total) - mp * mm,
    }


def correlation(t: JointCountTable) -> float:
    if not t.counts:
        raise DegenerateMarginal("empty joint table")
    m = joint_moments(t)
    if m["var_plus"] <= 0 or m["var_minus"] <= 0:
        raise DegenerateMarginal("a marginal has zero variance")
    return float(m["cov"]) / sqrt(float(m["var_plus"]) * float(m["var_minus"]))
