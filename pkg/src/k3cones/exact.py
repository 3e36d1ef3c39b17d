"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples holding ``int`` or ``fractions.Fraction``
entries. Every function returns fresh immutable tuples; nothing here ever
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Union

Scalar = Union[int, Fraction]
Vector = tuple
Matrix = tuple


class DimensionError(ValueError):
    """Shapes of the operands do not fit together."""


class SingularMatrixError(ValueError):
    """A nonsingular matrix was required."""


def as_matrix(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    m = tuple(tuple(_normalize(x) for x in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise DimensionError("ragged matrix rows")
    return m


def _normalize(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, bool) or not isinstance(x, int):
        # accept numpy integers and the like, reject floats
        if isinstance(x, float):
            raise TypeError("floating point entries are not allowed")
        return int(x)
    return x


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    if len(u) != len(v):
        raise DimensionError(f"vector lengths differ: {len(u)} != {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != shape(b)[0]:
        raise DimensionError(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(_normalize(dot(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence[Scalar]) -> Vector:
    if shape(a)[1] != len(v):
        raise DimensionError(f"cannot apply {shape(a)} matrix to length {len(v)}")
    return tuple(_normalize(dot(row, v)) for row in a)


def mat_pow(m: Matrix, k: int) -> Matrix:
    if k < 0:
        return mat_pow(inverse(m), -k)
    result = identity(len(m))
    base = m
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def is_square(m: Matrix) -> bool:
    r, c = shape(m)
    return r == c


def det(m: Matrix) -> Scalar:
    """Determinant by fraction-free (Bareiss) elimination, with sign."""
    if not is_square(m):
        raise DimensionError("determinant of a non-square matrix")
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else Fraction(num) / prev
            a[i][k] = 0
        prev = a[k][k]
    return _normalize(sign * a[n - 1][n - 1])


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    rows, cols = shape(m)
    a = [[Fraction(x) for x in row] for row in m]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return as_matrix(a[:r]), tuple(pivots)


def rank(m: Sequence[Sequence[Scalar]]) -> int:
    """Rank over the rationals; integer input uses a fraction-free sweep."""
    a = [list(row) for row in m if any(row)]
    if not a:
        return 0
    if not all(isinstance(x, int) for row in a for x in row):
        return len(rref(as_matrix(a))[1])
    cols = len(a[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pr = a[r]
        for i in range(r + 1, len(a)):
            x = a[i][c]
            if x:
                row = a[i]
                pc = pr[c]
                new = [pc * row[j] - x * pr[j] for j in range(cols)]
                g = 0
                for v in new:
                    g = gcd(g, v)
                a[i] = [v // g for v in new] if g > 1 else new
        r += 1
        if r == len(a):
            break
    return r


def primitive(v: Sequence[Scalar]) -> Vector:
    """Scale a nonzero rational vector to coprime integers, keeping direction."""
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def nullspace(m: Matrix, cols: int | None = None) -> Matrix:
    """Canonical integer basis of the right kernel.

    The basis is the reduced row echelon form of the kernel with each row
    scaled to coprime integers (positive pivot), so equal kernels give equal
    output.
    """
    if cols is None:
        cols = shape(m)[1]
    if not m:
        return identity(cols)
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -Fraction(row[f])
        basis.append(v)
    return canonical_basis(basis, cols)


def canonical_basis(vectors: Sequence[Sequence[Scalar]], cols: int) -> Matrix:
    """RREF basis of the span, rows scaled to primitive integers."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return ()
    red, _ = rref(as_matrix(vectors))
    return tuple(primitive(row) for row in red)


def inverse(m: Matrix) -> Matrix:
    if not is_square(m):
        raise DimensionError("inverse of a non-square matrix")
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(as_matrix(aug))
    if pivots[:n] != tuple(range(n)) or len(red) < n:
        raise SingularMatrixError("matrix is singular")
    return as_matrix([row[n:] for row in red])


def solve(a: Matrix, b) -> Matrix:
    """Solve ``a @ x = b`` for nonsingular square ``a``.

    ``b`` may be a matrix or a flat vector; the result has the same form.
    """
    flat = bool(b) and not isinstance(b[0], (tuple, list))
    bm = as_matrix([[x] for x in b]) if flat else as_matrix(b)
    if shape(a)[0] != shape(bm)[0]:
        raise DimensionError(f"right-hand side has {shape(bm)[0]} rows, expected {shape(a)[0]}")
    x = matmul(inverse(a), bm)
    return tuple(row[0] for row in x) if flat else x


def char_poly(m: Matrix) -> tuple[int, ...]:
    """Characteristic polynomial det(tI - m), highest degree first.

    Faddeev-LeVerrier recursion; all divisions are exact for integer input.
    """
    if not is_square(m):
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = len(m)
    coeffs = [1]
    mk = zeros(n, n)
    c = 1
    for k in range(1, n + 1):
        mk = matmul(m, mk)
        mk = tuple(tuple(x + (c if i == j else 0) for j, x in enumerate(row)) for i, row in enumerate(mk))
        am = matmul(m, mk)
        tr = sum(am[i][i] for i in range(n))
        c = _normalize(Fraction(-tr, k) if isinstance(tr, int) else -tr / k)
        coeffs.append(c)
    return tuple(coeffs)


@dataclass(frozen=True)
class SmithForm:
    """``left @ A @ right == diagonal(diag)`` with ``diag[i] | diag[i+1]``."""

    diag: tuple[int, ...]
    left: Matrix
    right: Matrix


def snf(a: Matrix) -> SmithForm:
    """Smith normal form with unimodular change-of-basis matrices.

    Elementary row/column reduction, always pivoting on the entry of least
    absolute value in the remaining block.
    """
    a = as_matrix(a)
    rows, cols = shape(a)
    if any(not isinstance(x, int) for row in a for x in row):
        raise TypeError("Smith normal form needs an integer matrix")
    m = [list(r) for r in a]
    left = [list(r) for r in identity(rows)]
    right = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q * row src
        m[dst] = [x + q * y for x, y in zip(m[dst], m[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, q):
        for r in m:
            r[dst] += q * r[src]
        for r in right:
            r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j] != 0]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = m[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    add_row(t, i, -(m[i][t] // p))
                    dirty |= m[i][t] != 0
            for j in range(t + 1, cols):
                if m[t][j]:
                    add_col(t, j, -(m[t][j] // p))
                    dirty |= m[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if m[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if t < rows and t < cols and m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            left[t] = [-x for x in left[t]]
    diag = tuple(m[i][i] for i in range(min(rows, cols)))
    return SmithForm(diag, as_matrix(left), as_matrix(right))


def diagonal(entries: Sequence[Scalar], rows: int | None = None, cols: int | None = None) -> Matrix:
    rows = len(entries) if rows is None else rows
    cols = len(entries) if cols is None else cols
    return tuple(tuple(entries[i] if i == j and i < len(entries) else 0 for j in range(cols)) for i in range(rows))


def _is_int(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


def is_integral(m) -> bool:
    """True when every entry of a matrix or vector is an integer value."""
    if m and isinstance(m[0], (tuple, list)):
        return all(_is_int(x) for row in m for x in row)
    return all(_is_int(x) for x in m)
