"""Small exact linear algebra over the rationals.

Matrices are lists of rows; entries may be ``int`` or ``Fraction``.
Everything here is sized for desk-scale geometry (dimension <= 5 or so).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of {x : rows @ x = 0}."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def det(mat: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant; integer input stays integer for n <= 3."""
    n = len(mat)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(mat[0][0])
    if n == 2:
        (a, b), (c, d) = mat
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = mat
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [[Fraction(x) for x in row] for row in mat]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return sign * result


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square nonsingular system ``a x = b`` exactly."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [red[i][n] for i in range(n)]


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    if all(type(x) is int for x in vec):
        g = 0
        for x in vec:
            g = gcd(g, x)
        return tuple(vec) if g in (0, 1) else tuple(x // g for x in vec)
    fr = [Fraction(x) for x in vec]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def int_echelon(rows: Sequence[Sequence[int]], limit: int | None = None) -> tuple[list[list[int]], list[int], list[int]]:
    """Fraction-free echelon basis of integer rows.

    Returns the basis, its pivot columns and the indices of the input rows
    that were kept. Stops once ``limit`` independent rows are found.
    """
    basis: list[list[int]] = []
    pivots: list[int] = []
    kept: list[int] = []
    for idx, row in enumerate(rows):
        v = list(row)
        for b, p in zip(basis, pivots):
            if v[p]:
                f, g = b[p], v[p]
                v = [x * f - y * g for x, y in zip(v, b)]
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            continue
        g = 0
        for x in v:
            g = gcd(g, x)
        basis.append([x // g for x in v])
        pivots.append(p)
        kept.append(idx)
        if limit is not None and len(basis) == limit:
            break
    return basis, pivots, kept
