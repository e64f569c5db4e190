"""Exit criteria, runnable from pytest and from ``zeckstats verify``.

Each check returns a ``CriterionResult``; nothing here raises on failure.
Tolerances are module constants so the test suite and the CLI agree.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from math import sqrt
from typing import Callable

import numpy as np

from .counting import count_dp_series, count_exhaustive, ks_distance, lekkerkerker_slope, variance_slope
from .decomposition import (
    EXHAUSTIVE_LIMIT,
    decompose,
    greedy_digits_batch,
    interval_size,
    legal_digit_matrix,
    recompose_digits,
    recompose_matrix,
    tiling_certificate,
    unrank_legal,
)
from .fardiff import (
    TARGET_CORRELATION,
    correlation,
    enumerate_signed,
    fardiff_decompose,
    joint_counts,
    signed_value,
)
from .recurrence import FIBONACCI, RecurrenceSpec, generate, validate_spec
from .spectral import char_poly, dominant_root, growth_check

ORACLE_SPECS = ((1, 1), (1, 1, 1), (10,), (2, 0, 1))
N_ORACLE = 18

LEKKERKERKER_TOL = 1e-4
KS_FIB_MAX = 0.02
KS_TRIB_MAX = 0.05
VARIANCE_RESIDUAL_MAX = 1.0
CORRELATION_TOL = 0.06
# observed gap at n=28 on the first run was 0.00485 (leading interval) and
# 0.0218 ([F_n, F_{n+1})); pinned at gap + 50%
CORRELATION_TOL_PINNED = {"leading": 0.0073, "fibonacci": 0.033}
CORRELATION_INVERSION = 0.01
ROOT_TOL = 1e-12
GROWTH_MAX = 1e-9
SAMPLES_BEYOND_CAP = 1000


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _specs() -> list[RecurrenceSpec]:
    return [validate_spec(c) for c in ORACLE_SPECS]


def _sampled_ranks(size: int, rng: random.Random) -> list[int]:
    k = SAMPLES_BEYOND_CAP
    ranks = set(range(min(k, size))) | set(range(max(0, size - k), size))
    ranks |= {rng.randrange(size) for _ in range(k)}
    return sorted(ranks)


def criterion_uniqueness() -> CriterionResult:
    """Legal strings of top index n recompose bijectively onto [H_n, H_{n+1})."""
    failures = []
    exhaustive = certified = 0
    rng = random.Random(0)
    for spec in _specs():
        table = generate(spec, N_ORACLE + 2)
        try:
            tiling_certificate(spec, N_ORACLE)
        except AssertionError as exc:
            failures.append(f"{spec}: tiling {exc}")
        for n in range(1, N_ORACLE + 1):
            lo, hi = table[n], table[n + 1]
            if hi - lo <= EXHAUSTIVE_LIMIT:
                digits = legal_digit_matrix(spec, n)
                values = recompose_matrix(digits, table)
                if not np.array_equal(np.sort(values), np.arange(lo, hi)):
                    failures.append(f"{spec} n={n}: not a bijection")
                    continue
                if not np.array_equal(greedy_digits_batch(values, table, n), digits):
                    failures.append(f"{spec} n={n}: decompose o recompose != id")
                # tie the batch path to the scalar decompose on the interval ends
                for i in (0, len(values) - 1):
                    if decompose(int(values[i]), table).digits != tuple(int(a) for a in digits[i]):
                        failures.append(f"{spec} n={n}: scalar decompose disagrees")
                exhaustive += 1
            else:
                # exact bijection comes from the tiling certificate; spot-check
                # decompose against lexicographic unranking
                for r in _sampled_ranks(hi - lo, rng):
                    s = unrank_legal(spec, n, r)
                    if recompose_digits(s, table) != lo + r or decompose(lo + r, table).digits != s:
                        failures.append(f"{spec} n={n} rank {r}")
                        break
                certified += 1
    detail = (
        f"{exhaustive} (spec, n) pairs exhaustive, {certified} beyond the "
        f"{EXHAUSTIVE_LIMIT:.0e} cap by tiling certificate + sampled decompose"
    )
    if failures:
        detail += "; failures: " + "; ".join(failures[:5])
    return CriterionResult(1, "generalized Zeckendorf uniqueness", not failures, detail)


def criterion_lekkerkerker() -> CriterionResult:
    phi = dominant_root(char_poly(FIBONACCI), ROOT_TOL)
    target = 1 / (phi * phi + 1)
    fit = lekkerkerker_slope(FIBONACCI, 50, 100)
    gap = abs(fit.slope - target)
    return CriterionResult(
        2,
        "Lekkerkerker slope",
        gap <= LEKKERKERKER_TOL,
        f"slope={fit.slope:.10f} target={target:.10f} |gap|={gap:.2e} <= {LEKKERKERKER_TOL}",
    )


def _ks_at(spec: RecurrenceSpec, ns) -> list[float]:
    wanted = set(ns)
    return [ks_distance(t) for t in count_dp_series(spec, max(ns)) if t.n in wanted]


def criterion_gaussian() -> CriterionResult:
    fib_ns, trib_ns = (100, 200, 400, 800), (100, 200, 400)
    fib = _ks_at(FIBONACCI, fib_ns)
    trib = _ks_at(validate_spec((1, 1, 1)), trib_ns)

    def decreasing(xs):
        return all(b < a for a, b in zip(xs, xs[1:]))

    ok = decreasing(fib) and fib[-1] < KS_FIB_MAX and decreasing(trib) and trib[-1] < KS_TRIB_MAX
    detail = (
        "(1,1) D=" + ", ".join(f"{d:.5f}" for d in fib)
        + f" (last < {KS_FIB_MAX}); (1,1,1) D=" + ", ".join(f"{d:.5f}" for d in trib)
        + f" (last < {KS_TRIB_MAX})"
    )
    return CriterionResult(3, "Gaussian convergence (KS)", ok, detail)


def criterion_variance() -> CriterionResult:
    parts, ok = [], True
    for coeffs in ((1, 1), (1, 1, 1)):
        fit = variance_slope(validate_spec(coeffs), 50, 100)
        ok &= fit.slope > 0 and fit.residual < VARIANCE_RESIDUAL_MAX
        parts.append(f"{coeffs}: slope={fit.slope:.6f} resid={fit.residual:.1e}")
    return CriterionResult(4, "linear variance", ok, "; ".join(parts))


def criterion_fardiff_uniqueness() -> CriterionResult:
    bound = generate(FIBONACCI, 18)[18]
    reps: dict = {}
    for terms in enumerate_signed(22):
        v = signed_value(terms)
        if abs(v) <= bound:
            reps.setdefault(v, []).append(terms)
    bad = [
        N
        for N in range(-bound, bound + 1)
        if len(reps.get(N, ())) != 1 or reps[N][0] != fardiff_decompose(N).terms
    ]
    detail = f"|N| <= F_18 = {bound}: {2 * bound + 1 - len(bad)}/{2 * bound + 1} unique and matching"
    if bad:
        detail += f"; first bad N={bad[:5]}"
    return CriterionResult(5, "far-difference uniqueness", not bad, detail)


def _trend_ok(values, target) -> bool:
    """Distance to target shrinks, allowing one inversion of at most 0.01."""
    gaps = [abs(v - target) for v in values]
    inversions = [b - a for a, b in zip(gaps, gaps[1:]) if b >= a]
    return len(inversions) <= 1 and all(x <= CORRELATION_INVERSION for x in inversions)


def criterion_correlation() -> CriterionResult:
    ns = (16, 20, 24, 28)
    ok, parts = True, []
    for interval in ("leading", "fibonacci"):
        corr = [correlation(joint_counts(n, interval)) for n in ns]
        gap = abs(corr[-1] - TARGET_CORRELATION)
        this = (
            _trend_ok(corr, TARGET_CORRELATION)
            and gap <= CORRELATION_TOL
            and gap <= CORRELATION_TOL_PINNED[interval]
        )
        ok &= this
        parts.append(
            f"{interval}: r=" + ", ".join(f"{c:.5f}" for c in corr)
            + f" gap@28={gap:.4f} (pinned {CORRELATION_TOL_PINNED[interval]})"
        )
    return CriterionResult(
        6, f"bivariate correlation -> {TARGET_CORRELATION:.6f}", ok, "; ".join(parts)
    )


def criterion_spectral() -> CriterionResult:
    phi = (1 + sqrt(5)) / 2
    lam = dominant_root(char_poly(FIBONACCI), ROOT_TOL)
    dev = growth_check(generate(FIBONACCI, 90), lam)
    ok = abs(lam - phi) <= ROOT_TOL and dev < GROWTH_MAX
    return CriterionResult(
        7, "spectral", ok, f"lambda={lam!r} |lambda-phi|={abs(lam - phi):.1e}; ratio deviation={dev:.1e}"
    )


def decimal_digit_sum_counts(n: int) -> dict:
    """Digit-sum counts of n-digit decimal numbers by polynomial powering.

    Independent of the cascade DP; confirmed against brute force where that
    can run, then used for (10) beyond the exhaustive cap.
    """
    lead = np.array([0] + [1] * 9, dtype=object)
    rest = np.array([1] * 10, dtype=object)
    poly = lead
    for _ in range(n - 1):
        poly = np.convolve(poly, rest)
    return {k: int(c) for k, c in enumerate(poly) if c}


def criterion_oracle_equivalence() -> CriterionResult:
    failures = []
    brute = closed = 0
    decimal = (10,)
    for spec in _specs():
        dp = {t.n: t.counts for t in count_dp_series(spec, N_ORACLE)}
        for n in range(1, N_ORACLE + 1):
            if interval_size(spec, n) <= EXHAUSTIVE_LIMIT:
                ex = count_exhaustive(spec, n).counts
                if ex != dp[n]:
                    failures.append(f"{spec} n={n}")
                if spec.coeffs == decimal and decimal_digit_sum_counts(n) != ex:
                    failures.append(f"decimal oracle n={n} disagrees with brute force")
                brute += 1
            elif spec.coeffs == decimal:
                if decimal_digit_sum_counts(n) != dp[n]:
                    failures.append(f"{spec} n={n} (polynomial oracle)")
                closed += 1
            else:
                failures.append(f"{spec} n={n}: no oracle available")
    detail = f"{brute} pairs vs brute force, {closed} (10)-pairs beyond cap vs brute-force-confirmed digit polynomial"
    if failures:
        detail += "; mismatches: " + ", ".join(failures[:5])
    return CriterionResult(8, "count_dp == count_exhaustive", not failures, detail)


CRITERIA: list[Callable[[], CriterionResult]] = [
    criterion_uniqueness,
    criterion_lekkerkerker,
    criterion_gaussian,
    criterion_variance,
    criterion_fardiff_uniqueness,
    criterion_correlation,
    criterion_spectral,
    criterion_oracle_equivalence,
]


def timed(check: Callable[[], CriterionResult]) -> CriterionResult:
    t0 = time.perf_counter()
    res = check()
    res.seconds = time.perf_counter() - t0
    return res


def run_all(echo=print) -> list[CriterionResult]:
    results = []
    for check in CRITERIA:
        res = timed(check)
        echo(res.line())
        results.append(res)
    return results
