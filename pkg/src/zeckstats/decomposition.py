"""Legal decompositions ``N = sum a_j H_{m+1-j}`` over a recurrence table.

Legality is a left-to-right cascade against the coefficient block
``(c_1, ..., c_L)``.  The reader keeps ``j``, the number of leading
coefficients matched so far in the current block, and on digit ``d``:

* ``d == c_{j+1}``: the match grows to ``j+1``; a full match of all ``L``
  coefficients is forbidden.
* ``d < c_{j+1}``: the block closes and matching restarts at ``j = 0``
  (zeros at ``j = 0`` are the run of zeros between blocks).
* ``d > c_{j+1}``: illegal.

For ``(1, 1)`` this is exactly "0/1 digits, no two adjacent ones", and for
``(b,)`` it is ordinary base-``b`` digits.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .errors import IndexOutOfTable, ScaleTooLarge, SpecMismatch, ValidationError
from .recurrence import RecurrenceSpec, SequenceTable, generate, largest_index_leq

EXHAUSTIVE_LIMIT = 10**7

FORBIDDEN = -1


@lru_cache(maxsize=None)
def transitions(spec: RecurrenceSpec) -> tuple[tuple[int, ...], ...]:
    """``transitions(spec)[j][d]`` is the next cascade state, or FORBIDDEN.

    Row ``j`` lists digits ``0..c_{j+1}``; larger digits are always illegal.
    """
    c = spec.coeffs
    L = len(c)
    rows = []
    for j in range(L):
        row = []
        for d in range(c[j] + 1):
            if d == c[j]:
                row.append(j + 1 if j + 1 < L else FORBIDDEN)
            else:
                row.append(0)
        rows.append(tuple(row))
    return tuple(rows)


def step(spec: RecurrenceSpec, state: int, digit: int) -> int:
    row = transitions(spec)[state]
    if digit < 0 or digit >= len(row):
        return FORBIDDEN
    return row[digit]


def digit_cap(spec: RecurrenceSpec, state: int) -> int:
    """Largest digit that keeps the string legal from ``state``."""
    row = transitions(spec)[state]
    return len(row) - 1 if row[-1] != FORBIDDEN else len(row) - 2


@dataclass(frozen=True)
class Decomposition:
    """Digits ``a_1..a_m`` with ``a_j`` multiplying ``H_{m+1-j}``.

    ``value == 0`` is the empty decomposition: no digits, ``top_index == 0``
    and zero summands.  Statistics code relies on this instead of an error.
    """

    spec: RecurrenceSpec
    top_index: int
    digits: tuple[int, ...]
    value: int

    @property
    def summands(self) -> int:
        return sum(self.digits)

    @property
    def is_empty(self) -> bool:
        return not self.digits

    def terms(self) -> list[tuple[int, int]]:
        """``(multiplicity, index)`` pairs for the nonzero digits, top first."""
        m = self.top_index
        return [(a, m - j) for j, a in enumerate(self.digits) if a]

    def text(self) -> str:
        if self.is_empty:
            return f"{self.value} = 0 (k=0)"
        parts = [f"H_{i}" if a == 1 else f"{a}*H_{i}" for a, i in self.terms()]
        return f"{self.value} = {' + '.join(parts)} (k={self.summands})"

    def line(self) -> str:
        return f"{self.value}\t{self.top_index}\t{','.join(map(str, self.digits))}"

    def record(self) -> dict:
        return {
            "value": str(self.value),
            "top_index": self.top_index,
            "digits": list(self.digits),
            "summands": self.summands,
        }

    def json(self) -> str:
        return json.dumps(self.record())


def empty(spec: RecurrenceSpec) -> Decomposition:
    return Decomposition(spec, 0, (), 0)


def recompose_digits(digits, table: SequenceTable) -> int:
    m = len(digits)
    if m > len(table):
        raise IndexOutOfTable(f"top index {m} beyond table of length {len(table)}")
    terms = table.terms
    return sum(a * terms[m - 1 - j] for j, a in enumerate(digits) if a)


def recompose(d: Decomposition, table: SequenceTable) -> int:
    if d.is_empty:
        return 0
    if table.spec != d.spec:
        raise SpecMismatch(f"decomposition over {d.spec} recomposed with table over {table.spec}")
    return recompose_digits(d.digits, table)


def from_digits(digits, table: SequenceTable) -> Decomposition:
    """Wrap a raw digit string (leading digit first); legality is not checked."""
    digits = tuple(int(a) for a in digits)
    if not digits:
        return empty(table.spec)
    table = table.extended(len(digits))
    return Decomposition(table.spec, len(digits), digits, recompose_digits(digits, table))


def is_legal_digits(digits, spec: RecurrenceSpec) -> bool:
    if not digits or digits[0] < 1:
        return False
    state = 0
    for a in digits:
        state = step(spec, state, a)
        if state == FORBIDDEN:
            return False
    return True


def is_legal(d: Decomposition, spec: RecurrenceSpec) -> bool:
    if d.spec != spec:
        raise SpecMismatch(f"decomposition built over {d.spec}, checked against {spec}")
    if not d.digits:
        raise ValidationError("is_legal needs at least one digit")
    return is_legal_digits(d.digits, spec)


def greedy_digits(N: int, table: SequenceTable) -> tuple[int, ...]:
    """Capped floor-greedy digits of ``N >= 1``; ``table`` must exceed ``N``."""
    m = largest_index_leq(table, N)
    terms = table.terms
    rows = transitions(table.spec)
    digits = []
    state = 0
    rem = N
    for pos in range(m - 1, -1, -1):
        h = terms[pos]
        row = rows[state]
        cap = len(row) - 1 if row[-1] != FORBIDDEN else len(row) - 2
        a = rem // h
        if a > cap:
            a = cap
        rem -= a * h
        digits.append(a)
        state = row[a]
    if rem:
        raise ArithmeticError(f"greedy left remainder {rem} for N={N} over {table.spec}")
    return tuple(digits)


def decompose(N: int, table: SequenceTable) -> Decomposition:
    if N < 0:
        raise ValidationError(f"cannot decompose negative N={N}")
    if N == 0:
        return empty(table.spec)
    table = table.covering(N)
    digits = greedy_digits(N, table)
    return Decomposition(table.spec, len(digits), digits, N)


def interval_size(spec: RecurrenceSpec, n: int) -> int:
    table = generate(spec, n + 1)
    return table[n + 1] - table[n]


def check_scale(spec: RecurrenceSpec, n: int, limit: int = EXHAUSTIVE_LIMIT) -> int:
    size = interval_size(spec, n)
    if size > limit:
        raise ScaleTooLarge(size, limit)
    return size


def iter_legal_digits(spec: RecurrenceSpec, n: int) -> Iterator[tuple[int, ...]]:
    """Legal digit strings of length exactly ``n`` in lexicographic order."""
    rows = transitions(spec)
    digits = [0] * n

    def walk(pos: int, state: int) -> Iterator[tuple[int, ...]]:
        if pos == n:
            yield tuple(digits)
            return
        row = rows[state]
        for a in range(1 if pos == 0 else 0, len(row)):
            nxt = row[a]
            if nxt == FORBIDDEN:
                continue
            digits[pos] = a
            yield from walk(pos + 1, nxt)

    if n >= 1:
        yield from walk(0, 0)


def _int_dtype(table: SequenceTable, n: int):
    # int64 is exact while every partial sum stays below H_{n+1} < 2**62
    return np.int64 if table[n + 1] < 2**62 else object


def legal_digit_matrix(spec: RecurrenceSpec, n: int) -> np.ndarray:
    """All legal strings of length ``n`` as rows of a matrix, lexicographic.

    Vectorized twin of ``iter_legal_digits``; each level repeats every row
    once per allowed next digit, so row order stays lexicographic.
    """
    rows = transitions(spec)
    L = len(rows)
    width = max(len(r) for r in rows)
    allowed = np.full((L, width), -1, dtype=np.int64)
    nexts = np.full((L, width), -1, dtype=np.int64)
    n_allowed = np.zeros(L, dtype=np.int64)
    for j, row in enumerate(rows):
        ok = [a for a, nxt in enumerate(row) if nxt != FORBIDDEN]
        n_allowed[j] = len(ok)
        allowed[j, : len(ok)] = ok
        nexts[j, : len(ok)] = [row[a] for a in ok]
    first = np.array([a for a in allowed[0, : n_allowed[0]] if a >= 1], dtype=np.int64)
    digits = first[:, None]
    states = np.array([rows[0][a] for a in first], dtype=np.int64)
    for _ in range(1, n):
        reps = n_allowed[states]
        parent = np.repeat(np.arange(len(states)), reps)
        starts = np.repeat(np.cumsum(reps) - reps, reps)
        offset = np.arange(len(parent)) - starts
        pstate = states[parent]
        digits = np.concatenate([digits[parent], allowed[pstate, offset][:, None]], axis=1)
        states = nexts[pstate, offset]
    return digits


def recompose_matrix(digits: np.ndarray, table: SequenceTable) -> np.ndarray:
    n = digits.shape[1]
    table = table.extended(n + 1)
    weights = np.array(table.terms[:n][::-1], dtype=_int_dtype(table, n))
    return digits.astype(weights.dtype) @ weights


def greedy_digits_batch(values: np.ndarray, table: SequenceTable, n: int) -> np.ndarray:
    """Capped greedy for many integers sharing top index ``n``, one row each."""
    table = table.extended(n + 1)
    dtype = _int_dtype(table, n)
    rows = transitions(table.spec)
    width = max(len(r) for r in rows)
    caps = np.array([digit_cap(table.spec, j) for j in range(len(rows))], dtype=np.int64)
    nexts = np.full((len(rows), width), -1, dtype=np.int64)
    for j, row in enumerate(rows):
        nexts[j, : len(row)] = row
    rem = np.asarray(values).astype(dtype)
    state = np.zeros(len(rem), dtype=np.int64)
    out = np.empty((len(rem), n), dtype=np.int64)
    for pos in range(n):
        h = table[n - pos]
        a = np.minimum(rem // h, caps[state]).astype(np.int64)
        rem = rem - a.astype(dtype) * h
        out[:, pos] = a
        state = nexts[state, a]
    if len(rem) and (rem != 0).any():
        raise ArithmeticError("greedy left a nonzero remainder")
    return out


def enumerate_legal(
    spec: RecurrenceSpec, n: int, limit: int = EXHAUSTIVE_LIMIT
) -> list[Decomposition]:
    check_scale(spec, n, limit)
    table = generate(spec, n + 1)
    digits = legal_digit_matrix(spec, n)
    values = recompose_matrix(digits, table)
    return [
        Decomposition(spec, n, tuple(int(a) for a in row), int(v))
        for row, v in zip(digits, values)
    ]


def tiling_certificate(spec: RecurrenceSpec, n_max: int, rows=None) -> list[int]:
    """Exact inductive check that recompose is a bijection onto ``[H_n, H_{n+1})``.

    Let ``span[j]`` be the number of values reachable by legal continuations
    of length ``l`` from cascade state ``j`` (leading zeros allowed).  If for
    every state the digit blocks ``a*H_l + [0, span_{l-1}[next])`` abut with
    no gap or overlap, the continuations are in bijection with
    ``[0, span_l[j])``.  Returns the list of ``n <= n_max`` for which the
    length-``n`` strings with nonzero lead tile ``[H_n, H_{n+1})`` exactly;
    failures raise ``AssertionError`` naming the first bad ``(n, state)``.
    """
    table = generate(spec, n_max + 1)
    rows = rows or transitions(spec)
    span = [1] * len(rows)
    certified = []
    for l in range(1, n_max + 1):
        h = table[l]
        new_span = []
        for j, row in enumerate(rows):
            end = 0
            for a, nxt in enumerate(row):
                if nxt == FORBIDDEN:
                    continue
                if a * h != end:
                    raise AssertionError(f"gap/overlap at length {l}, state {j}, digit {a}")
                end = a * h + span[nxt]
            new_span.append(end)
        span = new_span
        # leading digit >= 1 from state 0 covers [H_l, span[0])
        if span[0] != table[l + 1]:
            raise AssertionError(f"length {l} strings cover [{h}, {span[0]}), expected end {table[l + 1]}")
        certified.append(l)
    return certified


def unrank_legal(spec: RecurrenceSpec, n: int, r: int) -> tuple[int, ...]:
    """The ``r``-th (0-based) legal string of length ``n`` in lexicographic order."""
    rows = transitions(spec)
    # cont[l][j]: number of legal continuations of length l from state j
    cont = [[1] * len(rows)]
    for l in range(1, n):
        prev = cont[-1]
        cont.append([sum(prev[x] for x in row if x != FORBIDDEN) for row in rows])
    digits = []
    state = 0
    for pos in range(n):
        rest = cont[n - 1 - pos]
        for a, nxt in enumerate(rows[state]):
            if nxt == FORBIDDEN or (pos == 0 and a == 0):
                continue
            if r < rest[nxt]:
                digits.append(a)
                state = nxt
                break
            r -= rest[nxt]
        else:
            raise IndexError("rank exceeds the number of legal strings")
    return tuple(digits)


def decompositions_tsv(decomps) -> str:
    return "".join(d.line() + "\n" for d in decomps)


def decompositions_csv(decomps) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["value", "top_index", "digits", "summands"])
    for d in decomps:
        writer.writerow([str(d.value), d.top_index, ",".join(map(str, d.digits)), d.summands])
    return buf.getvalue()


def lexicographically_largest(N: int, table: SequenceTable) -> Optional[tuple[int, ...]]:
    """Brute force: the largest legal string (over all lengths) recomposing to ``N``.

    Longer strings compare larger since the leading digit is nonzero.  Only
    usable at tiny scale; serves as the greedy-maximality oracle.
    """
    table = table.covering(N)
    best = None
    for m in range(1, len(table) + 1):
        if table[m] > N:
            break
        for digits in iter_legal_digits(table.spec, m):
            if recompose_digits(digits, table) == N:
                if best is None or (len(digits), digits) > (len(best), best):
                    best = digits
    return best
