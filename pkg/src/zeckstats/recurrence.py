"""Positive linear recurrences and their sequence tables.

A recurrence is given by nonnegative coefficients ``c_1..c_L`` with
``c_1, c_L > 0``.  Terms are 1-indexed::

    H_1 = 1
    H_{n+1} = c_1 H_n + ... + c_n H_1 + 1        for 1 <= n < L
    H_{n+1} = c_1 H_n + ... + c_L H_{n+1-L}      for n >= L

All arithmetic is on Python ints, so tables of any length are exact.
"""
from __future__ import annotations

import bisect
import csv
import io
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    DegenerateSpec,
    EmptyCoeffs,
    IndexOutOfTable,
    LeadingZero,
    NegativeCoeff,
    TrailingZero,
    ValidationError,
)


@dataclass(frozen=True)
class RecurrenceSpec:
    coeffs: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def max_coeff(self) -> int:
        return max(self.coeffs)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


def validate_spec(coeffs: Iterable[int]) -> RecurrenceSpec:
    coeffs = tuple(coeffs)
    if not coeffs:
        raise EmptyCoeffs("coefficient list is empty")
    for c in coeffs:
        if isinstance(c, bool) or not isinstance(c, int):
            raise ValidationError(f"coefficient {c!r} is not an integer")
        if c < 0:
            raise NegativeCoeff(f"negative coefficient {c} in {coeffs}")
    if coeffs[0] == 0:
        raise LeadingZero(f"c_1 must be positive, got {coeffs}")
    if coeffs[-1] == 0:
        raise TrailingZero(f"c_L must be positive, got {coeffs}")
    if coeffs == (1,):
        # H_2 = c_1 H_1 = 1 = H_1: the table would not be strictly increasing
        raise DegenerateSpec("spec (1) generates the constant sequence 1, 1, 1, ...")
    return RecurrenceSpec(coeffs)


def parse_spec(text: str) -> RecurrenceSpec:
    """Parse the comma-separated serialization, e.g. ``"2,0,3"``."""
    text = text.strip()
    if not text:
        raise EmptyCoeffs("empty spec string")
    try:
        coeffs = [int(part) for part in text.split(",")]
    except ValueError:
        raise ValidationError(f"cannot parse spec {text!r}") from None
    return validate_spec(coeffs)


FIBONACCI = RecurrenceSpec((1, 1))


def _next_term(coeffs: Sequence[int], terms: Sequence[int]) -> int:
    # terms holds H_1..H_n; returns H_{n+1}
    n = len(terms)
    L = len(coeffs)
    total = 0
    for i in range(min(n, L)):
        total += coeffs[i] * terms[n - 1 - i]
    if n < L:
        total += 1
    return total


@dataclass(frozen=True)
class SequenceTable:
    spec: RecurrenceSpec
    terms: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, index: int) -> int:
        """1-based access: ``table[i]`` is ``H_i``."""
        if not 1 <= index <= len(self.terms):
            raise IndexOutOfTable(f"H_{index} not in table of length {len(self.terms)}")
        return self.terms[index - 1]

    def extended(self, n: int) -> "SequenceTable":
        """Return a table with at least ``n`` terms; existing terms are shared."""
        if n <= len(self.terms):
            return self
        terms = list(self.terms)
        while len(terms) < n:
            terms.append(_next_term(self.spec.coeffs, terms))
        return SequenceTable(self.spec, tuple(terms))

    def covering(self, x: int) -> "SequenceTable":
        """Return a table whose last term exceeds ``x``."""
        table = self
        while table.terms[-1] <= x:
            table = table.extended(2 * len(table) + 8)
        return table

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "term"])
        for i, h in enumerate(self.terms, start=1):
            writer.writerow([i, str(h)])
        return buf.getvalue()


def generate(spec: RecurrenceSpec, n: int) -> SequenceTable:
    if n < 1:
        raise ValidationError(f"table length must be >= 1, got {n}")
    return SequenceTable(spec, (1,)).extended(n)


def largest_index_leq(table: SequenceTable, x: int) -> Optional[int]:
    """Largest ``i`` with ``H_i <= x``, or None when ``x < H_1``."""
    return bisect.bisect_right(table.terms, x) or None
