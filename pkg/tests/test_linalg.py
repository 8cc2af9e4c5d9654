import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from varcalc import _echelon_py, linalg

KERNELS = {"python": _echelon_py.fraction_free_echelon}
try:
    from varcalc._echelon import fraction_free_echelon as _compiled

    KERNELS["cython"] = _compiled
except ImportError:  # pragma: no cover
    pass


def gauss_jordan(matrix, rhs):
    """Textbook Fraction elimination; the solution with free variables 0, or None."""
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    m, n = len(a), len(matrix[0])
    r, pivots = 0, []
    for c in range(n + 1):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        a[r] = [v / a[r][c] for v in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                a[i] = [vi - a[i][c] * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = a[i][n]
    return x


def random_system(rng, big=False):
    m, n = rng.randint(1, 7), rng.randint(1, 7)
    hi = 10 ** 30 if big else 4
    entry = lambda: rng.choice([0, 0, rng.randint(-hi, hi), Fraction(rng.randint(-hi, hi), rng.randint(1, 5))])
    matrix = [[entry() for _ in range(n)] for _ in range(m)]
    if rng.random() < 0.5 and m > 1:
        # force a dependent row
        matrix[-1] = [a + 2 * b for a, b in zip(matrix[0], matrix[1 % m])]
    if rng.random() < 0.6:
        x = [rng.randint(-3, 3) for _ in range(n)]
        rhs = [sum(Fraction(a) * b for a, b in zip(row, x)) for row in matrix]
    else:
        rhs = [entry() for _ in range(m)]
    return matrix, rhs


def _residual_zero(matrix, rhs, x):
    return all(sum(Fraction(a) * b for a, b in zip(row, x)) == r for row, r in zip(matrix, rhs))


@pytest.mark.parametrize("name", sorted(KERNELS))
@pytest.mark.parametrize("big", [False, True])
def test_solve_against_gauss_jordan(name, big):
    rng = random.Random(7 + big)
    kernel = KERNELS[name]
    for _ in range(300):
        matrix, rhs = random_system(rng, big)
        got = linalg.solve_rational(matrix, rhs, kernel=kernel)
        want = gauss_jordan(matrix, rhs)
        assert (got is None) == (want is None)
        if got is not None:
            assert _residual_zero(matrix, rhs, got)
            # same pivot choice and free variables at zero: identical solution
            assert got == want


def test_backends_agree_on_echelon_form():
    if "cython" not in KERNELS:
        pytest.skip("compiled kernel not built")
    rng = random.Random(11)
    for trial in range(300):
        big = trial % 3 == 0
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        hi = 2 ** 62 if big else 9
        rows = [[rng.choice([0, rng.randint(-hi, hi)]) for _ in range(n)] for _ in range(m)]
        a = [list(r) for r in rows]
        b = [list(r) for r in rows]
        assert KERNELS["python"](a, n) == KERNELS["cython"](b, n)
        assert a == b


def test_overflow_fallback_is_exact():
    # products of these entries overflow int64 on the first elimination step
    big = 3 * 10 ** 18
    matrix = [[big, big + 1], [big - 1, big]]
    rhs = [1, 2]
    for kernel in KERNELS.values():
        x = linalg.solve_rational(matrix, rhs, kernel=kernel)
        assert _residual_zero(matrix, rhs, x)


def test_inconsistent_and_empty():
    assert linalg.solve_rational([[1, 1], [2, 2]], [1, 3]) is None
    assert linalg.solve_rational([[0, 0]], [0]) == [0, 0]
    assert linalg.solve_rational([], []) == []


def test_fraction_entries():
    x = linalg.solve_rational([[Fraction(1, 2), 0], [0, Fraction(2, 3)]], [1, 1])
    assert x == [2, Fraction(3, 2)]
    assert type(x[0]) is int


def test_rank():
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert linalg.rank([]) == 0


def test_backend_selected():
    forced = os.environ.get("VARCALC_PURE_PYTHON", "") not in ("", "0")
    expected = "cython" if "cython" in KERNELS and not forced else "python"
    assert linalg.BACKEND == expected


def test_environment_forces_fallback():
    env = dict(os.environ, VARCALC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from varcalc import linalg; print(linalg.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
