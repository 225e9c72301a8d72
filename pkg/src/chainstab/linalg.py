"""Exact rational matrix helpers.

Matrices are lists of rows of ``Fraction``; nothing here ever touches a float.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]


def frac(x) -> Fraction:
    """Parse an int, Fraction or rational string like ``"-3/2"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        # accept the unicode minus sign as well
        return Fraction(x.strip().replace("−", "-"))
    raise TypeError(f"not an exact rational: {x!r}")


def to_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[frac(x) for x in row] for row in rows]


def shape(m: Sequence[Sequence], ncols: int | None = None) -> tuple[int, int]:
    if not m:
        return 0, (ncols or 0)
    return len(m), len(m[0])


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Product ``a @ b``. ``inner`` gives the shared dimension when either side is empty."""
    if inner is None:
        inner = len(b) if b else (len(a[0]) if a else 0)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                oi = out[i]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += x * bk[j]
    return out


def transpose(m: Matrix, ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matvec(m: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m]


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns. The input is not modified."""
    a = [row[:] for row in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        if pv != 1:
            a[r] = [x / pv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def _int_rank(rows: list[list[int]]) -> int:
    """Fraction-free elimination; every step keeps the entries integral."""
    a = [r for r in rows if any(r)]
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        if r == len(a):
            break
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pr, pv = a[r], a[r][c]
        for i in range(r + 1, len(a)):
            f = a[i][c]
            if f:
                a[i] = [pv * x - f * y for x, y in zip(a[i], pr)]
        r += 1
    return r


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    # scaling a row by its common denominator keeps the rank
    rows = []
    for row in m:
        row = [x if isinstance(x, (int, Fraction)) else frac(x) for x in row]
        den = lcm(*(1 if isinstance(x, int) else x.denominator for x in row))
        rows.append([x * den if isinstance(x, int) else x.numerator * (den // x.denominator) for x in row])
    return _int_rank(rows)


def nullspace(m: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : m x = 0}`` for a matrix with ``ncols`` columns."""
    if not m:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def column_space(m: Matrix, nrows: int) -> list[list[Fraction]]:
    """A basis (as vectors) of the column space of ``m``."""
    if not m or not m[0]:
        return []
    _, pivots = rref(m)
    return [[m[i][c] for i in range(nrows)] for c in pivots]


def det(m: Matrix) -> Fraction:
    n = len(m)
    a = [row[:] for row in m]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        pv = a[c][c]
        out *= pv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / pv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * out


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [row[:] + ident for row, ident in zip(m, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def primitive(v: Sequence[Fraction]) -> list[Fraction]:
    """Scale ``v`` to a primitive integer vector whose first nonzero entry is positive."""
    from math import gcd, lcm

    nz = [x for x in v if x != 0]
    if not nz:
        return [Fraction(0)] * len(v)
    den = 1
    for x in nz:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if nz[0] < 0:
        g = -g
    return [Fraction(x, g) for x in ints]
