"""Dominant root of the characteristic polynomial and growth checks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoSignChange, TableTooShort, ValidationError
from .recurrence import RecurrenceSpec, SequenceTable


@dataclass(frozen=True)
class CharPoly:
    """``x^L - c_1 x^{L-1} - ... - c_L``; ``coefficients`` run from x^L down."""

    spec: RecurrenceSpec

    @property
    def coefficients(self) -> tuple[int, ...]:
        return (1,) + tuple(-c for c in self.spec.coeffs)

    @property
    def degree(self) -> int:
        return self.spec.order

    def __call__(self, x):
        acc = 0
        for a in self.coefficients:
            acc = acc * x + a
        return acc

    def derivative(self, x):
        acc = 0
        d = self.degree
        for i, a in enumerate(self.coefficients[:-1]):
            acc = acc * x + a * (d - i)
        return acc


def char_poly(spec: RecurrenceSpec) -> CharPoly:
    return CharPoly(spec)


BRACKET_WIDTH = Fraction(1, 10**6)


def dominant_root(p: CharPoly, tol: float = 1e-12) -> float:
    """Unique positive root of ``p``.

    Exact rational bisection on ``[1, 1 + sum c_i]`` down to a bracket of
    width 1e-6, then float Newton kept inside the bracket.
    """
    if not 1e-15 < tol <= 1e-6:
        raise ValidationError(f"tol must lie in (1e-15, 1e-6], got {tol}")
    lo, hi = Fraction(1), Fraction(1 + sum(p.spec.coeffs))
    if p(lo) == 0:
        return 1.0
    if p(hi) == 0:
        return float(hi)
    if not (p(lo) < 0 < p(hi)):
        raise NoSignChange(f"p(1)={p(lo)}, p({hi})={p(hi)}")
    while hi - lo > BRACKET_WIDTH:
        mid = (lo + hi) / 2
        v = p(mid)
        if v == 0:
            return float(mid)
        if v < 0:
            lo = mid
        else:
            hi = mid
    a, b = float(lo), float(hi)
    x = (a + b) / 2
    # float iterates, exact residuals: polish to the float fixed point,
    # tol is the acceptance condition
    for _ in range(200):
        fx = p(Fraction(x))
        if fx == 0:
            break
        if fx < 0:
            a = x
        else:
            b = x
        nxt = x - float(fx / p.derivative(Fraction(x)))
        if not a <= nxt <= b:
            nxt = (a + b) / 2
        if nxt == x:
            break
        x = nxt
    r = Fraction(x)
    # below one ulp of the root no float does better
    if abs(p(r)) > Fraction(max(tol, math.ulp(x))) * p.derivative(r):
        raise NoSignChange(f"Newton failed to reach tolerance {tol} near {x}")
    return x


def sign_check(p: CharPoly, root: float, tol: float) -> bool:
    """``p(root - 10 tol) < 0 < p(root + 10 tol)``, evaluated exactly."""
    r = Fraction(root)
    step = 10 * Fraction(tol)
    return p(r - step) < 0 < p(r + step)


def growth_check(table: SequenceTable, lam: float, window: int = 10) -> float:
    """Max relative deviation ``|H_{n+1}/H_n - lam| / lam`` over the last ratios."""
    L = table.spec.order
    if len(table) < 2 * L + 10:
        raise TableTooShort(f"need at least {2 * L + 10} terms, have {len(table)}")
    terms = table.terms
    worst = 0.0
    for i in range(len(terms) - window - 1, len(terms) - 1):
        ratio = float(Fraction(terms[i + 1], terms[i]))
        worst = max(worst, abs(ratio - lam) / lam)
    return worst


def root_report(spec: RecurrenceSpec, tol: float = 1e-12, n: int = 90) -> dict:
    from .recurrence import generate

    lam = dominant_root(char_poly(spec), tol)
    table = generate(spec, max(n, 2 * spec.order + 10))
    return {
        "spec": str(spec),
        "lambda": lam,
        "tol": tol,
        "growth_deviation": growth_check(table, lam),
    }
