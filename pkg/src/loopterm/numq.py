"""Exact rational scalars, vectors and matrices.

Scalars are :class:`fractions.Fraction` (always in lowest terms).  Vectors are
plain tuples of fractions.  :class:`QMatrix` is a small immutable row-major
matrix.  Row reduction and determinants use fraction-free (Bareiss style)
integer elimination; results are normalised back to fractions at the end.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

QVector = tuple  # tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``. Decimals, exponents and floats are rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a rational literal: {text!r}")
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in s and int(s.split("/")[1]) == 0:
        raise ValueError("zero denominator")
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(values: Iterable) -> QVector:
    return tuple(Fraction(v) for v in values)


def zero_vector(d: int) -> QVector:
    return (Fraction(0),) * d


def unit_vector(d: int, i: int) -> QVector:
    return tuple(Fraction(int(j == i)) for j in range(d))


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vadd(u: Sequence, v: Sequence) -> QVector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> QVector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> QVector:
    c = Fraction(c)
    return tuple(c * a for a in v)


def is_zero_vector(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def primitive(v: Sequence) -> QVector:
    """Positive rescaling of ``v`` to a primitive integer vector."""
    if is_zero_vector(v):
        return tuple(Fraction(0) for _ in v)
    den = reduce(lcm, (Fraction(a).denominator for a in v), 1)
    ints = [int(Fraction(a) * den) for a in v]
    g = reduce(gcd, (abs(a) for a in ints if a), 0)
    return tuple(Fraction(a // g) for a in ints)


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = reduce(lcm, (a.denominator for a in row), 1)
    return [int(a * den) for a in row]


class QMatrix:
    """Immutable dense matrix of fractions. Zero-row matrices are allowed."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(Fraction(x) for x in r) for r in data)
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMatrix:
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, values: Sequence) -> QMatrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> QMatrix:
        return cls([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple:
        """Row-major flat tuple of entries."""
        return tuple(x for r in self._data for x in r)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> QVector:
        return self._data[i]

    def col(self, j: int) -> QVector:
        return tuple(r[j] for r in self._data)

    def row_tuples(self) -> tuple:
        return self._data

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.cols, self._data))

    def __repr__(self):
        body = "; ".join(", ".join(format_rational(x) for x in r) for r in self._data)
        return f"QMatrix[{body}]"

    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def T(self) -> QMatrix:
        if not self.rows:
            return QMatrix([[]] * self.cols, cols=0)
        return QMatrix(zip(*self._data), cols=self.rows)

    def __add__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], cols=self.cols
        )

    def __sub__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], cols=self.cols
        )

    def __neg__(self) -> QMatrix:
        return QMatrix([[-a for a in r] for r in self._data], cols=self.cols)

    def scale(self, c) -> QMatrix:
        c = Fraction(c)
        return QMatrix([[c * a for a in r] for r in self._data], cols=self.cols)

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = list(zip(*other._data)) if other.rows else [()] * other.cols
            return QMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols] for r in self._data],
                cols=other.cols,
            )
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError(f"cannot multiply {self.shape} by vector of length {len(v)}")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._data)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._data for a in r)


def matrix(data, cols: int | None = None) -> QMatrix:
    """Build a QMatrix from nested numbers or rational strings."""
    return QMatrix([[parse_rational(x) if isinstance(x, str) else x for x in r] for r in data], cols=cols)


def _ff_gauss_jordan(rows: list[list[int]], ncols: int):
    """Fraction-free Gauss-Jordan on an integer matrix, in place.

    Returns (rank, pivots). Every pivot row ends with its pivot entry equal to
    the final common pivot value; all divisions are exact.
    """
    m = len(rows)
    r = 0
    prev = 1
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            new = []
            for j in range(ncols):
                num = piv * row[j] - f * prow[j]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("inexact fraction-free division")
                new.append(q)
            rows[i] = new
        prev = piv
        pivots.append(c)
        r += 1
    return r, pivots


def rref(M: QMatrix) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [_integer_row(r) for r in M.row_tuples()]
    rank, pivots = _ff_gauss_jordan(rows, M.cols)
    out = []
    for i, row in enumerate(rows):
        if i < rank:
            piv = row[pivots[i]]
            out.append([Fraction(a, piv) for a in row])
        else:
            out.append([0] * M.cols)
    return QMatrix(out, cols=M.cols), pivots


def rank(M: QMatrix) -> int:
    rows = [_integer_row(r) for r in M.row_tuples()]
    return _ff_gauss_jordan(rows, M.cols)[0]


def normalize_direction(v: Sequence) -> QVector:
    """Scale so the first nonzero entry is 1, then clear to integer numerators."""
    lead = next((a for a in v if a != 0), None)
    if lead is None:
        return tuple(Fraction(a) for a in v)
    return primitive([Fraction(a) / lead for a in v])


def kernel_basis(M: QMatrix) -> list[QVector]:
    """Basis of {x : M x = 0}, one vector per free column, normalised."""
    R, pivots = rref(M)
    pivot_set = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivot_set:
            continue
        x = [Fraction(0)] * M.cols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i, f]
        basis.append(normalize_direction(x))
    return basis


def row_space_basis(vectors: Sequence[Sequence], dim: int) -> list[QVector]:
    """RREF basis of the span of ``vectors`` (in R^dim)."""
    if not vectors:
        return []
    R, pivots = rref(QMatrix(vectors, cols=dim))
    return [R.row(i) for i in range(len(pivots))]


def solve(M: QMatrix, b: Sequence) -> QVector | None:
    """One exact solution of M x = b (free variables set to 0), or None."""
    aug = QMatrix([list(r) + [bi] for r, bi in zip(M.row_tuples(), b)], cols=M.cols + 1)
    R, pivots = rref(aug)
    if M.cols in pivots:
        return None
    x = [Fraction(0)] * M.cols
    for i, p in enumerate(pivots):
        x[p] = R[i, M.cols]
    return tuple(x)


def det(A: QMatrix) -> Fraction:
    """Determinant by Bareiss elimination with row pivoting."""
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return Fraction(1)
    dens = [reduce(lcm, (a.denominator for a in r), 1) for r in A.row_tuples()]
    M = [[int(a * d) for a in r] for r, d in zip(A.row_tuples(), dens)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    scale = reduce(lambda a, b: a * b, dens, 1)
    return Fraction(sign * M[n - 1][n - 1], scale)


def is_invertible(A: QMatrix) -> bool:
    if not A.is_square():
        raise ValueError("invertibility of a non-square matrix")
    return rank(A) == A.rows


def inverse(A: QMatrix) -> QMatrix:
    n = A.rows
    aug = QMatrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A.row_tuples())], cols=2 * n)
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return QMatrix([R.row(i)[n:] for i in range(n)], cols=n)


# univariate polynomials over Q as coefficient tuples, lowest degree first


def _ptrim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(p, q):
    n = max(len(p), len(q))
    return _ptrim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def _pneg(p):
    return [-a for a in p]


def _pmul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _ptrim(out)


def _pdiv_exact(p, q):
    p = list(p)
    out = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    for i in range(len(p) - len(q), -1, -1):
        c = Fraction(p[i + len(q) - 1]) / lead
        out[i] = c
        if c:
            for j, b in enumerate(q):
                p[i + j] -= c * b
    if any(a != 0 for a in p):
        raise ArithmeticError("inexact polynomial division")
    return _ptrim(out)


def char_poly(A: QMatrix) -> tuple:
    """Monic characteristic polynomial det(X I - A), coefficients low to high.

    Bareiss elimination over Q[X]; the leading principal minors of X I - A
    are monic, so no pivoting is required.
    """
    if not A.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = A.rows
    if n == 0:
        return (Fraction(1),)
    M = [
        [_ptrim([-A[i, j], Fraction(1)] if i == j else [-A[i, j]]) for j in range(n)]
        for i in range(n)
    ]
    prev = [Fraction(1)]
    for k in range(n - 1):
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _padd(_pmul(M[k][k], M[i][j]), _pneg(_pmul(M[i][k], M[k][j])))
                M[i][j] = _pdiv_exact(num, prev) if num else []
        prev = M[k][k]
    result = tuple(Fraction(a) for a in M[n - 1][n - 1])
    assert result[-1] == 1 and len(result) == n + 1
    return result


def upoly_eval(p: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def upoly_eval_matrix(p: Sequence, A: QMatrix) -> QMatrix:
    """Horner evaluation of a univariate polynomial at a square matrix."""
    n = A.rows
    acc = QMatrix.zeros(n, n)
    ident = QMatrix.identity(n)
    for a in reversed(p):
        acc = acc @ A + ident.scale(a)
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def positive_rational_roots(p: Sequence) -> list[Fraction]:
    """Distinct positive rational roots of a univariate polynomial, ascending."""
    coeffs = [Fraction(a) for a in p]
    _ptrim(coeffs)
    if not coeffs:
        raise ValueError("zero polynomial")
    shift = 0
    while coeffs[shift] == 0:
        shift += 1
    coeffs = coeffs[shift:]
    den = reduce(lcm, (a.denominator for a in coeffs), 1)
    ints = [int(a * den) for a in coeffs]
    roots = set()
    if len(ints) > 1:
        for num in _divisors(ints[0]):
            for d in _divisors(ints[-1]):
                r = Fraction(num, d)
                if r not in roots and upoly_eval(ints, r) == 0:
                    roots.add(r)
    return sorted(roots)
