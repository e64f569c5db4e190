import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zeckstats.errors import TableTooShort, ValidationError
from zeckstats.recurrence import FIBONACCI, generate, validate_spec
from zeckstats.spectral import char_poly, dominant_root, growth_check, root_report, sign_check

PHI = (1 + math.sqrt(5)) / 2


def bisect_root(coeffs, resolution=1e-12):
    """Plain float bisection for x^L = sum c_i x^(L-i) on [1, 1 + sum c]."""
    def f(x):
        return x ** len(coeffs) - sum(c * x ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs))

    lo, hi = 1.0, 1.0 + sum(coeffs)
    while hi - lo > resolution:
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def test_char_poly_coefficients():
    p = char_poly(validate_spec([2, 0, 3]))
    assert p.coefficients == (1, -2, 0, -3)
    assert p.degree == 3
    assert p(2) == 8 - 8 - 3
    assert p.derivative(2) == 3 * 4 - 2 * 2 * 2


def test_golden_mean():
    lam = dominant_root(char_poly(FIBONACCI), 1e-12)
    assert abs(lam - PHI) <= 1e-12
    assert repr(lam) == "1.618033988749895"


def test_decimal_root():
    assert dominant_root(char_poly(validate_spec([10])), 1e-12) == pytest.approx(10, abs=1e-12)


def test_tribonacci_against_bisection_oracle():
    oracle = bisect_root([1, 1, 1])
    assert oracle == pytest.approx(1.839286755, abs=1e-9)
    lam = dominant_root(char_poly(validate_spec([1, 1, 1])), 1e-12)
    assert abs(lam - oracle) < 1e-10


def test_tolerance_range():
    p = char_poly(FIBONACCI)
    for tol in (1e-16, 1e-5, 0):
        with pytest.raises(ValidationError):
            dominant_root(p, tol)


@given(st.lists(st.integers(0, 50), min_size=1, max_size=6).filter(
    lambda c: c[0] > 0 and c[-1] > 0 and c != [1]))
def test_root_brackets_sign_change(coeffs):
    p = char_poly(validate_spec(coeffs))
    tol = 1e-12
    lam = dominant_root(p, tol)
    assert abs(p(lam)) <= tol * p.derivative(lam)
    assert sign_check(p, lam, tol)


def test_large_coefficients():
    spec = validate_spec([10**6, 0, 7])
    p = char_poly(spec)
    lam = dominant_root(p, 1e-12)
    # float spacing near 1e6 is ~1.2e-10, so bracket at that scale
    assert abs(lam - 1e6) < 1e-9
    assert sign_check(p, lam, 1e-8)


def test_growth_fibonacci():
    lam = dominant_root(char_poly(FIBONACCI), 1e-12)
    assert growth_check(generate(FIBONACCI, 90), lam) < 1e-15


def test_growth_decimal_exact():
    assert growth_check(generate(validate_spec([10]), 20), 10.0) == 0.0


def test_growth_tribonacci():
    spec = validate_spec([1, 1, 1])
    lam = dominant_root(char_poly(spec), 1e-12)
    assert growth_check(generate(spec, 60), lam) < 1e-9


def test_growth_table_too_short():
    with pytest.raises(TableTooShort):
        growth_check(generate(validate_spec([1, 1, 1]), 15), 1.84)


def test_ratios_converge_monotonically_in_error():
    # successive ratio errors shrink (alternating sign for Fibonacci)
    H = generate(FIBONACCI, 40).terms
    errs = [abs(H[i + 1] / H[i] - PHI) for i in range(3, 35)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_lekkerkerker_target_from_root():
    lam = dominant_root(char_poly(FIBONACCI), 1e-12)
    assert 1 / (lam**2 + 1) == pytest.approx(0.2763932, abs=1e-7)


def test_root_report():
    report = root_report(FIBONACCI)
    assert set(report) == {"spec", "lambda", "tol", "growth_deviation"}
    assert report["spec"] == "1,1"
