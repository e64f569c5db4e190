"""Exit criteria; one PASS/FAIL line per criterion (run with ``-s`` to see them)."""
import pytest

from zeckstats import acceptance

# wall-clock budgets in seconds, where one is stated
BUDGET = {1: 60, 2: 30, 3: 300, 5: 120}


@pytest.mark.parametrize("check", acceptance.CRITERIA, ids=lambda f: f.__name__.removeprefix("criterion_"))
def test_criterion(check):
    res = acceptance.timed(check)
    print("\n" + res.line())
    assert res.passed, res.detail
    if res.number in BUDGET:
        assert res.seconds < BUDGET[res.number]


def test_trend_rule():
    t = -0.55
    assert acceptance._trend_ok([-0.50, -0.52, -0.54], t)
    assert acceptance._trend_ok([-0.50, -0.52, -0.515, -0.54], t)  # one small inversion
    assert not acceptance._trend_ok([-0.50, -0.52, -0.50, -0.54], t)  # inversion > 0.01
    assert not acceptance._trend_ok([-0.50, -0.49, -0.52, -0.51], t)  # two inversions


def test_decimal_polynomial_oracle_matches_brute_force():
    from zeckstats.counting import count_exhaustive
    from zeckstats.recurrence import validate_spec

    for n in range(1, 6):
        assert acceptance.decimal_digit_sum_counts(n) == count_exhaustive(validate_spec([10]), n).counts
