"""Exact linear algebra over Q and over commutative rings of exact elements.

Ring elements only need ``+``, ``-``, ``*`` with each other and with ints, and
``bool(x)`` meaning "x is nonzero".
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Any, Sequence


def _is_field_element(x) -> bool:
    return isinstance(x, (int, Fraction))


def det(M: Sequence[Sequence[Any]], method: str = "auto"):
    """Determinant of a square matrix.

    ``auto`` uses Gaussian elimination when every entry is a rational and a
    memoised cofactor expansion otherwise.  ``bareiss`` needs entries with an
    ``exact_div`` method (or rationals).
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    if n == 0:
        return Fraction(1)
    if method == "auto":
        method = "gauss" if all(_is_field_element(x) for row in M for x in row) else "laplace"
    if method == "gauss":
        return det_gauss(M)
    if method == "laplace":
        return det_laplace(M)
    if method == "bareiss":
        return det_bareiss(M)
    if method == "leibniz":
        return det_leibniz(M)
    raise ValueError(f"unknown determinant method {method!r}")


def det_gauss(M) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        pv = A[c][c]
        result *= pv
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] / pv
                rowr, rowc = A[r], A[c]
                for j in range(c + 1, n):
                    if rowc[j]:
                        rowr[j] -= f * rowc[j]
    return sign * result


def _zero_like(M):
    for row in M:
        for x in row:
            return x * 0
    return 0


def det_laplace(M):
    """Cofactor expansion with minors memoised on the set of used columns.

    Rows are processed sparsest first, and zero entries are skipped, so
    triangular-ish Wronskian matrices cost little more than their diagonal.
    """
    n = len(M)
    zero = _zero_like(M)
    nz = [[bool(x) for x in row] for row in M]
    if any(not any(r) for r in nz):
        return zero
    if any(not any(nz[r][c] for r in range(n)) for c in range(n)):
        return zero
    order = sorted(range(n), key=lambda r: (sum(nz[r]), r))
    # sign of the row permutation
    sign = 1
    perm = list(order)
    for i in range(n):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    rows = [M[r] for r in order]
    rnz = [nz[r] for r in order]
    memo: dict[int, Any] = {}

    def minor(depth: int, used: int):
        if depth == n:
            return 1
        if used in memo:
            return memo[used]
        total = None
        pos = 0  # number of free columns before c, for the cofactor sign
        row = rows[depth]
        rownz = rnz[depth]
        for c in range(n):
            if used >> c & 1:
                continue
            if rownz[c]:
                sub = minor(depth + 1, used | (1 << c))
                if sub:
                    term = row[c] * sub
                    if pos & 1:
                        total = -term if total is None else total - term
                    else:
                        total = term if total is None else total + term
            pos += 1
        if total is None:
            total = zero
        memo[used] = total
        return total

    res = minor(0, 0)
    return res if sign == 1 else -res


def det_bareiss(M):
    """Fraction-free elimination; entries must support ``exact_div``."""
    A = [list(row) for row in M]
    n = len(A)
    sign = 1
    prev = 1
    for c in range(n - 1):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return _zero_like(M)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                num = A[r][j] * A[c][c] - A[r][c] * A[c][j]
                A[r][j] = _exact_div(num, prev)
            A[r][c] = A[r][c] * 0
        prev = A[c][c]
    res = A[n - 1][n - 1]
    return res if sign == 1 else -res


def _exact_div(a, b):
    if isinstance(b, int) and b == 1:
        return a
    if _is_field_element(a) and _is_field_element(b):
        return Fraction(a) / b
    return a.exact_div(b)


def det_leibniz(M):
    """Permutation-sum determinant; an independent oracle for small sizes."""
    n = len(M)
    total = _zero_like(M) if n else 1
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = term * M[i][perm[i]]
            if not term:
                break
        if not term:
            continue
        total = total - term if inv & 1 else total + term
    return total


# ---------------------------------------------------------------------------
# rank and solving over Q

def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    A = [[Fraction(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def solve(A, b) -> list[Fraction]:
    """Solve ``A x = b`` exactly; raise if inconsistent or underdetermined."""
    if not A:
        raise ValueError("empty system")
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    R, piv = rref(aug)
    ncols = len(A[0])
    if ncols in piv:
        raise ValueError("inconsistent linear system")
    if len(piv) < ncols:
        raise ValueError("underdetermined linear system")
    x = [Fraction(0)] * ncols
    for i, c in enumerate(piv):
        x[c] = R[i][ncols]
    return x


def matmul(A, B):
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
