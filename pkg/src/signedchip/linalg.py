"""Exact dense linear algebra over the integers and rationals.

Entries are Python ``int`` (arbitrary precision) or ``fractions.Fraction``
(always in lowest terms with a positive denominator), so every operation
here is exact.  Matrices are small (n <= ~30), so plain nested tuples are
used rather than numpy object arrays.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, IntegralityError, SingularMatrixError


def _norm(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return int(x)
    if hasattr(x, "__index__"):  # numpy integers
        return int(x)
    raise TypeError(f"unsupported matrix entry {x!r}")


class Matrix:
    """Immutable rectangular matrix of ints / Fractions.

    Integral entries are stored as ``int`` so that equality is structural:
    ``Matrix([[Fraction(2, 1)]]) == Matrix([[2]])``.
    """

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, entries):
        rows = tuple(tuple(_norm(x) for x in row) for row in entries)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix, (self._rows,))

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, values):
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return self.rows

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"Matrix({[list(map(_fmt, r)) for r in self._rows]})"

    def tolist(self):
        return [list(r) for r in self._rows]

    def row(self, i):
        return self._rows[i]

    def column(self, j):
        return tuple(r[j] for r in self._rows)

    def transpose(self):
        return Matrix(zip(*self._rows)) if self.rows else Matrix([])

    def is_integral(self):
        return all(isinstance(x, int) for r in self._rows for x in r)

    def __neg__(self):
        return Matrix([[-x for x in r] for r in self._rows])

    def __add__(self, other):
        _check_same_shape(self, other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other):
        _check_same_shape(self, other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def scale(self, k):
        return Matrix([[k * x for x in r] for r in self._rows])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return mat_vec(self, other)


def _fmt(x):
    return str(x) if isinstance(x, Fraction) else x


def _check_same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")


def _require_square(a, what):
    if not a.is_square:
        raise DimensionError(f"{what} requires a square matrix, got {a.shape}")


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    bt = list(zip(*b)) if b.rows else [()] * b.cols
    return Matrix([[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a])


def mat_vec(a: Matrix, x: Sequence) -> tuple:
    """Exact product ``a @ x``; returns a tuple of ints / Fractions."""
    if len(x) != a.cols:
        raise DimensionError(f"cannot multiply {a.shape} matrix by length-{len(x)} vector")
    return tuple(_norm(sum(aij * xj for aij, xj in zip(r, x))) for r in a)


def det(a: Matrix):
    """Determinant by fraction-free (Bareiss) elimination."""
    _require_square(a, "det")
    n = a.rows
    if n == 0:
        return 1
    if not a.is_integral():
        return _det_rational(a)
    m = a.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _det_rational(a):
    denom = 1
    for r in a:
        for x in r:
            if isinstance(x, Fraction):
                denom = denom * x.denominator // _gcd(denom, x.denominator)
    scaled = a.scale(denom)
    return _norm(Fraction(det(scaled), denom ** a.rows))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def invert(a: Matrix) -> Matrix:
    """Exact inverse via Gauss-Jordan elimination over the rationals."""
    _require_square(a, "invert")
    n = a.rows
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        inv_p = 1 / m[k][k]
        m[k] = [x * inv_p for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return Matrix([row[n:] for row in m])


def solve(a: Matrix, b: Sequence) -> tuple:
    """Solve ``a x = b`` exactly for nonsingular square ``a``."""
    return mat_vec(invert(a), b)


def adjugate(a: Matrix) -> Matrix:
    """Integer adjugate ``det(a) * a^-1`` of an integer matrix."""
    d = det(a)
    if d == 0:
        raise SingularMatrixError("adjugate requested for a singular matrix")
    return to_int_matrix(invert(a).scale(d))


def to_int_matrix(a: Matrix) -> Matrix:
    if not a.is_integral():
        raise IntegralityError("matrix has non-integral entries")
    return a


@dataclass(frozen=True)
class SNFDecomposition:
    """``u @ a @ v == diag(d)`` with unimodular ``u``, ``v``."""

    d: tuple
    u: Matrix
    v: Matrix


def smith_normal_form(a: Matrix) -> SNFDecomposition:
    """Smith normal form with transforms.

    Pivot is the entry of minimal nonzero absolute value in the trailing
    submatrix; row operations accumulate into ``u``, column operations into
    ``v``.
    """
    _require_square(a, "smith_normal_form")
    if not a.is_integral():
        raise IntegralityError("Smith normal form needs an integer matrix")
    n = a.rows
    m = a.tolist()
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        m[dst] = [x + k * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for row in m:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(n):
        while True:
            nonzero = [(abs(m[i][j]), i, j) for i in range(t, n) for j in range(t, n) if m[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = m[t][t]
            dirty = False
            for i in range(t + 1, n):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // p))
                    dirty = dirty or m[i][t] != 0
            for j in range(t + 1, n):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // p))
                    dirty = dirty or m[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, n) for j in range(t + 1, n) if m[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]

    d = tuple(m[i][i] for i in range(n))
    return SNFDecomposition(d=d, u=Matrix(u), v=Matrix(v))


def hermite_lower(a: Matrix):
    """Column-style Hermite normal form of a nonsingular integer matrix.

    Returns ``h`` lower triangular with ``h[i][i] > 0`` and
    ``0 <= h[i][j] < h[i][i]`` for ``j < i``; the columns of ``h`` span the
    same lattice as the columns of ``a``.
    """
    _require_square(a, "hermite_lower")
    if not a.is_integral():
        raise IntegralityError("Hermite normal form needs an integer matrix")
    n = a.rows
    cols = [list(c) for c in zip(*a)] if n else []
    for i in range(n):
        while True:
            live = [j for j in range(i, n) if cols[j][i]]
            if not live:
                raise SingularMatrixError("matrix is singular")
            j0 = min(live, key=lambda j: abs(cols[j][i]))
            cols[i], cols[j0] = cols[j0], cols[i]
            p = cols[i][i]
            done = True
            for j in range(i + 1, n):
                q = cols[j][i] // p
                if q:
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[i])]
                if cols[j][i]:
                    done = False
            if done:
                break
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
        for j in range(i):
            q = cols[j][i] // cols[i][i]
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[i])]
    return Matrix(zip(*cols)) if n else Matrix([])
