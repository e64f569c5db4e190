import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zeckstats.errors import (
    DegenerateMarginal,
    NonDecreasingIndices,
    ScaleTooLarge,
    ValidationError,
)
from zeckstats.fardiff import (
    TARGET_CORRELATION,
    JointCountTable,
    SignedDecomposition,
    boundary_sum,
    correlation,
    enumerate_signed,
    fardiff_decompose,
    interval_bounds,
    is_valid_fardiff,
    joint_counts,
    joint_counts_naive,
    joint_moments,
    signed_count_arrays,
    signed_value,
)
from zeckstats.recurrence import FIBONACCI, generate, validate_spec

F = generate(FIBONACCI, 40).terms


def brute_signed(N, max_index=8):
    """All sign vectors over F_1..F_max obeying the gap rules and summing to N."""
    found = []
    for signs in itertools.product((-1, 0, 1), repeat=max_index):
        terms = [(i + 1, s) for i, s in enumerate(signs) if s][::-1]
        ok = all(a - b >= (4 if s == t else 3) for (a, s), (b, t) in zip(terms, terms[1:]))
        if ok and sum(s * F[i - 1] for i, s in terms) == N:
            found.append(tuple(terms))
    return found


def test_indexing_convention():
    assert F[:4] == (1, 2, 3, 5)


def test_four_against_brute_force():
    assert brute_signed(4) == [((4, 1), (1, -1))]
    d = fardiff_decompose(4)
    assert d.terms == ((4, 1), (1, -1))
    assert d.text() == "4 = +F_4 - F_1"


def test_small_examples():
    assert fardiff_decompose(3).terms == ((3, 1),)
    assert fardiff_decompose(-4).terms == ((4, -1), (1, 1))
    assert fardiff_decompose(0).terms == ()


def test_rejects_non_fibonacci_table():
    with pytest.raises(ValidationError):
        fardiff_decompose(4, generate(validate_spec([1, 1, 1]), 5))
    assert fardiff_decompose(4, generate(FIBONACCI, 5)).terms == ((4, 1), (1, -1))


def test_boundary_sums():
    assert [boundary_sum(n) for n in range(0, 8)] == [0, 1, 2, 3, 5, 9, 15, 24]
    # S_n is the largest value with leading index n: F_n + F_{n-4} + ...
    for n in range(1, 20):
        assert boundary_sum(n) == F[n - 1] + (boundary_sum(n - 4) if n > 4 else 0)


@pytest.mark.parametrize(
    "terms, valid",
    [
        (((9, 1), (5, 1)), True),
        (((9, 1), (6, 1)), False),
        (((9, 1), (6, -1)), True),
        (((9, 1), (7, -1)), False),
        ((), True),
    ],
)
def test_gap_rules(terms, valid):
    assert is_valid_fardiff(SignedDecomposition(signed_value(terms), terms)) is valid


def test_non_decreasing_indices():
    with pytest.raises(NonDecreasingIndices):
        is_valid_fardiff(SignedDecomposition(0, ((5, 1), (9, -1))))


def test_round_trip_million():
    bound = 10**6
    for N in range(-bound, bound + 1):
        d = fardiff_decompose(N)
        assert signed_value(d.terms) == N


@given(st.integers(-(10**40), 10**40))
def test_round_trip_valid_antisymmetric(N):
    d = fardiff_decompose(N)
    assert d.value == N and signed_value(d.terms) == N
    assert is_valid_fardiff(d)
    assert fardiff_decompose(-N) == d.negated()


def test_uniqueness_against_enumeration():
    bound = F[17]  # F_18
    reps = {}
    for terms in enumerate_signed(22):
        v = signed_value(terms)
        if abs(v) <= bound:
            reps.setdefault(v, []).append(terms)
    for N in range(-bound, bound + 1):
        assert reps[N] == [fardiff_decompose(N).terms]


def test_enumerate_signed_are_valid():
    seen = set()
    for terms in enumerate_signed(12):
        d = SignedDecomposition(signed_value(terms), terms)
        assert is_valid_fardiff(d)
        assert terms not in seen
        seen.add(terms)
    # values of leading-index-<=12 representations fill [-S_12, S_12]
    assert sorted(signed_value(t) for t in seen) == list(range(-boundary_sum(12), boundary_sum(12) + 1))


def test_count_arrays_match_decompose():
    kp, km = signed_count_arrays(50_000)
    for N in range(0, 50_001, 13):
        d = fardiff_decompose(N)
        assert (kp[N], km[N]) == (d.k_plus, d.k_minus)


@pytest.mark.parametrize("interval", ["leading", "fibonacci"])
def test_joint_counts_match_naive(interval):
    for n in range(1, 16):
        assert joint_counts(n, interval) == joint_counts_naive(n, interval)


def test_joint_counts_examples():
    t4 = joint_counts(4)
    assert interval_bounds(4) == (4, 6)
    assert all(p >= 1 for p, _ in t4.counts)
    lo, hi = interval_bounds(10)
    assert joint_counts(10).total == hi - lo == boundary_sum(10) - boundary_sum(9)
    lo, hi = interval_bounds(10, "fibonacci")
    assert (lo, hi) == (F[9], F[10])
    assert joint_counts(10, "fibonacci").total == hi - lo


def test_marginal_means_grow_linearly():
    ns = (16, 20, 24, 28)
    mp = [float(joint_moments(joint_counts(n))["mean_plus"]) for n in ns]
    mm = [float(joint_moments(joint_counts(n))["mean_minus"]) for n in ns]
    for means in (mp, mm):
        steps = np.diff(means)
        assert (steps > 0).all()
        assert steps.max() - steps.min() < 0.05 * steps.mean()


def test_joint_counts_scale_guard():
    with pytest.raises(ScaleTooLarge):
        joint_counts(40)
    with pytest.raises(ValidationError):
        joint_counts(5, "bogus")


def test_correlation_examples():
    assert TARGET_CORRELATION == pytest.approx(-0.551058, abs=1e-6)
    assert correlation(JointCountTable(0, "leading", {(1, 0): 1, (0, 1): 1})) == pytest.approx(-1)
    with pytest.raises(DegenerateMarginal):
        correlation(JointCountTable(0, "leading", {(1, 0): 3, (1, 1): 2}))


def test_correlation_n28():
    r = correlation(joint_counts(28))
    assert abs(r - TARGET_CORRELATION) < 0.0073
    r_fib = correlation(joint_counts(28, "fibonacci"))
    assert abs(r_fib - TARGET_CORRELATION) < 0.033


def test_exports():
    d = fardiff_decompose(100)
    assert d.text() == "100 = +F_10 + F_6 - F_2"
    assert d.record() == {"value": "100", "terms": [[10, 1], [6, 1], [2, -1]]}
    assert joint_counts(4).to_csv() == "n,k_plus,k_minus,count\n4,1,0,1\n4,1,1,1\n"
