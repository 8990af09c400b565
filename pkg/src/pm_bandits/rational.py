"""
Exact rational linear algebra.

Row-space membership is a rank condition, which floating point can misjudge
near the tolerance boundary. For games whose entries are small fractions we
redo the linear algebra over :class:`fractions.Fraction` with plain
Gauss-Jordan elimination. Matrices are numpy ``object`` arrays of Fractions
so the rest of the package can use the same ``@`` / ``-`` expressions in
both modes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .settings import REDUCTION_SETTINGS


def to_rational(value, max_denominator: int | None = None) -> Fraction:
    """Fraction for *value*, preferring a small denominator that round-trips."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    exact = Fraction(float(value))
    limit = max_denominator or REDUCTION_SETTINGS["max_denominator"]
    small = exact.limit_denominator(limit)
    return small if float(small) == float(value) else exact


def is_small_rational(value, max_denominator: int | None = None) -> bool:
    if isinstance(value, (Fraction, int, np.integer)):
        return True
    limit = max_denominator or REDUCTION_SETTINGS["max_denominator"]
    value = float(value)
    if not np.isfinite(value):
        return False
    return float(Fraction(value).limit_denominator(limit)) == value


def all_small_rationals(values: Iterable, max_denominator: int | None = None) -> bool:
    return all(is_small_rational(v, max_denominator) for v in values)


def as_rational_array(values, max_denominator: int | None = None) -> np.ndarray:
    """Object array of Fractions with the shape of *values*."""
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_rational(v, max_denominator)
    return out


def is_rational_array(arr: np.ndarray) -> bool:
    return isinstance(arr, np.ndarray) and arr.dtype == object


def as_float_array(arr) -> np.ndarray:
    return np.asarray(arr, dtype=float)


def row_reduce(rows: Sequence[Sequence], rhs: Sequence | None = None):
    """
    Gauss-Jordan elimination over the rationals.

    Returns ``(reduced_rows, reduced_rhs, pivot_columns)``; inputs are not
    modified.
    """
    m = [[to_rational(x) for x in row] for row in rows]
    t = None if rhs is None else [to_rational(x) for x in rhs]
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    pivots: list[int] = []
    piv_r = 0
    for piv_c in range(n_cols):
        pick = next((r for r in range(piv_r, n_rows) if m[r][piv_c] != 0), None)
        if pick is None:
            continue
        if pick != piv_r:
            m[piv_r], m[pick] = m[pick], m[piv_r]
            if t is not None:
                t[piv_r], t[pick] = t[pick], t[piv_r]
        fp = m[piv_r][piv_c]
        m[piv_r] = [x / fp for x in m[piv_r]]
        if t is not None:
            t[piv_r] = t[piv_r] / fp
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if fr == 0:
                continue
            m[r] = [a - fr * b for a, b in zip(m[r], m[piv_r])]
            if t is not None:
                t[r] -= fr * t[piv_r]
        pivots.append(piv_c)
        piv_r += 1
        if piv_r == n_rows:
            break
    return m, t, pivots


def rank(matrix) -> int:
    rows = np.asarray(matrix, dtype=object).tolist()
    if not rows or not rows[0]:
        return 0
    return len(row_reduce(rows)[2])


def solve(matrix, rhs) -> np.ndarray | None:
    """
    One exact solution of ``matrix @ x = rhs`` (free variables set to zero),
    or ``None`` when the system is inconsistent.
    """
    rows = np.asarray(matrix, dtype=object).tolist()
    n_cols = len(rows[0])
    m, t, pivots = row_reduce(rows, list(np.asarray(rhs, dtype=object)))
    for r in range(len(pivots), len(m)):
        if t[r] != 0:
            return None
    x = np.array([Fraction(0)] * n_cols, dtype=object)
    for r, c in enumerate(pivots):
        x[c] = t[r]
    return x


def format_rational(value) -> int | str | float:
    """JSON-friendly rendering: ints stay ints, other Fractions become "p/q"."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    return float(value)
