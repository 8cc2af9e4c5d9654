"""Exact linear algebra over the rationals.

The row reduction kernel comes from the compiled ``_echelon`` extension when
it is importable and from ``_echelon_py`` otherwise.  Setting the
environment variable ``VARCALC_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence

from . import _echelon_py

if os.environ.get("VARCALC_PURE_PYTHON", "") not in ("", "0"):
    fraction_free_echelon = _echelon_py.fraction_free_echelon
    BACKEND = "python"
else:
    try:
        from ._echelon import fraction_free_echelon
        BACKEND = "cython"
    except ImportError:  # extension not built
        fraction_free_echelon = _echelon_py.fraction_free_echelon
        BACKEND = "python"

py_fraction_free_echelon = _echelon_py.fraction_free_echelon


def _integral_row(row: Sequence) -> List[int]:
    den = 1
    for a in row:
        if isinstance(a, Fraction):
            den = lcm(den, a.denominator)
    if den == 1:
        return [int(a) for a in row]
    return [int(a * den) for a in row]


def solve_rational(matrix: Sequence[Sequence], rhs: Sequence, kernel=None) -> Optional[List]:
    """One exact solution of ``matrix @ x = rhs``, or None if inconsistent.

    Free variables are set to zero.  Entries may be ints or Fractions.
    """
    echelon = kernel or fraction_free_echelon
    ncols = len(matrix[0]) if matrix else 0
    rows = [_integral_row(list(r) + [b]) for r, b in zip(matrix, rhs)]
    if not rows:
        return [0] * ncols
    pivots = echelon(rows, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x: List = [0] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = rows[r]
        s = row[ncols]
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        q = Fraction(s, row[c])
        x[c] = q.numerator if q.denominator == 1 else q
    return x


def rank(matrix: Sequence[Sequence], kernel=None) -> int:
    echelon = kernel or fraction_free_echelon
    if not matrix:
        return 0
    rows = [_integral_row(r) for r in matrix]
    return len(echelon(rows, len(rows[0])))
