"""Independent reference implementations the library is checked against.

Everything here deliberately avoids the library's production code paths:
values come from Horner evaluation, standard forms from big-integer binary
expansion, distributions from direct enumeration of all increment strings,
and pair cells from a hand-written classification.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np


def horner_value(digits) -> int:
    """Exact value via Horner's rule (independent of the packbits path)."""
    v = 0
    for d in digits:
        v = 2 * v + int(d)
    return v


def bigint_canonical(digits) -> list[int]:
    """Standard form as the n-digit binary expansion of |value|, negated if value < 0."""
    digits = [int(d) for d in digits]
    n = len(digits)
    v = horner_value(digits)
    sign = 1 if v >= 0 else -1
    bits = [int(ch) for ch in format(abs(v), "b").zfill(n)] if n else []
    assert len(bits) == n, "value must fit in n binary digits"
    return [sign * b for b in bits]


def all_digit_matrix(n: int) -> np.ndarray:
    """All 3^n digit strings as an int8 matrix, base-3 enumeration order."""
    idx = np.arange(3**n, dtype=np.int64)[:, None]
    pows = 3 ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx // pows) % 3 - 1).astype(np.int8)


def brute_force_distribution(p: int, n: int, q=(1 / 3, 1 / 3, 1 / 3), multiplier=2):
    """Endpoint law by direct enumeration of all 3^n weighted increment strings."""
    if n == 0:
        out = np.zeros(p)
        out[0] = 1.0
        return out
    mat = all_digit_matrix(n).astype(np.int64)
    weights_vec = multiplier ** np.arange(n - 1, -1, -1, dtype=np.int64)
    values = mat @ weights_vec
    c_plus = (mat == 1).sum(axis=1)
    c_minus = (mat == -1).sum(axis=1)
    c_zero = n - c_plus - c_minus
    w = (q[2] ** c_plus) * (q[1] ** c_zero) * (q[0] ** c_minus)
    return np.bincount(values % p, weights=w, minlength=p)


def naive_pair_cells(digits) -> np.ndarray:
    """Pure-Python pair tally (6 rows, 4 cols, 2 parities) via the big-int oracle."""
    digits = [int(d) for d in digits]
    sign = next((1 if d > 0 else -1 for d in digits if d), 0)
    assert sign != 0, "all-zero input has no pair statistics"
    raw = [d * sign for d in digits]
    canon = bigint_canonical(raw)
    cells = np.zeros((6, 4, 2), dtype=np.int64)
    col_of = {(0, 0): 0, (0, 1): 1, (1, 1): 2, (1, 0): 3}
    for a in range(1, len(raw)):
        u, v = raw[a - 1], raw[a]
        if u == 1 and v == 1:
            row = 0
        elif u != 1 and v != 1:
            row = 1
        elif u == 0 and v == 1:
            row = 2
        elif u == -1 and v == 1:
            row = 3
        elif u == 1 and v == 0:
            row = 4
        else:
            row = 5
        cells[row, col_of[(canon[a - 1], canon[a])], a % 2] += 1
    return cells


def string_count_in_region(m: int, ranges) -> int:
    """Number of length-m strings over 4 symbols whose symbol counts satisfy ranges.

    Direct enumeration of all 4^m strings; equals the multinomial sum over the
    integer tuples inside ranges (inclusive (lo, hi) per symbol).
    """
    count = 0
    for s in product(range(4), repeat=m):
        counts = [s.count(k) for k in range(4)]
        if all(lo <= c <= hi for c, (lo, hi) in zip(counts, ranges)):
            count += 1
    return count


def pascal_binomial_tail(n: int, eps: float) -> int:
    """Binomial tail sum from an explicitly built Pascal triangle."""
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    lo = max(math.ceil((0.4 - eps) * n), 0)
    hi = min(math.floor((0.4 + eps) * n), n)
    return sum(row[lo : hi + 1])
