"""Exact linear algebra over Z, Q and the rational quaternions.

Everything here is exact: rationals are :class:`fractions.Fraction`, integers are
Python ints.  ``H^m`` is treated as a right H-module with matrices acting on the
left, and realification uses the basis ``(1, i, j, k)`` in every coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

Rational = Fraction
Scalar = int | Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _normalize(x):
    # keep integral Fractions as ints so integer matrices stay integer
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


# --------------------------------------------------------------------------
# Matrices over Z / Q
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix with int or Fraction entries.

    Shape is carried explicitly so that 0 x n and n x 0 matrices behave.
    """

    rows: int
    cols: int
    data: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError(f"inconsistent matrix shape {self.rows}x{self.cols}")

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(_normalize(as_rational(x)) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence], rows: int) -> "Matrix":
        if not cols:
            return cls.zeros(rows, 0)
        return cls.from_rows(cols, cols=rows).T

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls.from_rows([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks)
        out = [[0] * c for _ in range(r)]
        i0 = j0 = 0
        for b in blocks:
            for i in range(b.rows):
                out[i0 + i][j0:j0 + b.cols] = b.data[i]
            i0 += b.rows
            j0 += b.cols
        return cls(r, c, tuple(tuple(row) for row in out))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("hstack row mismatch")
        return Matrix(self.rows, self.cols + other.cols,
                      tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("vstack column mismatch")
        return Matrix(self.rows + other.rows, self.cols, self.data + other.data)

    # access ---------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.data]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def is_integral(self) -> bool:
        return all(isinstance(x, int) or x.denominator == 1 for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(self.data[i][j] == self.data[j][i]
                                        for i in range(self.rows) for j in range(i))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Matrix(self.rows, self.cols, tuple(tuple(_normalize(a + b) for a, b in zip(r, s))
                                                  for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = _normalize(as_rational(c))
        return Matrix(self.rows, self.cols, tuple(tuple(_normalize(c * a) for a in r) for r in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T.data
        return Matrix(self.rows, other.cols,
                      tuple(tuple(_normalize(sum(a * b for a, b in zip(r, c))) for c in cols)
                            for r in self.data))

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(_normalize(sum(a * b for a, b in zip(r, v))) for r in self.data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"Matrix({self.to_lists()!r})"

    # linear algebra over Q ------------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form over Q and the pivot columns."""
        m = [[Fraction(x) for x in r] for r in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            p = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix.from_rows(m, cols=self.cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self):
        """Exact determinant (Bareiss for integer matrices, elimination otherwise)."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        if self.is_integral():
            return _bareiss_det([[int(x) for x in r] for r in self.data])
        m = [[Fraction(x) for x in r] for r in self.data]
        det = Fraction(1)
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c] != 0), None)
            if p is None:
                return 0
            if p != c:
                m[c], m[p] = m[p], m[c]
                det = -det
            det *= m[c][c]
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] / m[c][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return _normalize(det)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        aug = self.hstack(Matrix.identity(self.rows))
        red, piv = aug.rref()
        if piv != list(range(self.rows)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix.from_rows([r[self.rows:] for r in red.data], cols=self.rows)

    def kernel(self) -> list[tuple]:
        """Basis of the right kernel over Q, one vector per free column."""
        red, piv = self.rref()
        free = [c for c in range(self.cols) if c not in piv]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, pc in enumerate(piv):
                v[pc] = -Fraction(red.data[r][f])
            basis.append(tuple(_normalize(x) for x in v))
        return basis

    def solve(self, rhs: "Matrix") -> "Matrix":
        """Return X with ``self @ X == rhs``; self must have full column rank."""
        if rhs.rows != self.rows:
            raise ValueError("right-hand side row mismatch")
        red, piv = self.hstack(rhs).rref()
        if [p for p in piv if p < self.cols] != list(range(self.cols)):
            raise ValueError("coefficient matrix is not of full column rank")
        if any(p >= self.cols for p in piv):
            raise ValueError("linear system is inconsistent")
        return Matrix.from_rows([r[self.cols:] for r in red.data[: self.cols]], cols=rhs.cols)


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


IntMatrix = Matrix
RationalMatrix = Matrix


def real_kernel(A: Matrix) -> list[tuple]:
    """Basis of ``{v : A v = 0}`` over Q (dimension ``cols - rank``)."""
    return A.kernel()


def compound_matrix(A: Matrix, k: int) -> Matrix:
    """k-th exterior power of A in the lexicographic basis of k-subsets."""
    from itertools import combinations

    rs = list(combinations(range(A.rows), k))
    cs = list(combinations(range(A.cols), k))
    return Matrix.from_rows([[A.submatrix(r, c).det() for c in cs] for r in rs], cols=len(cs))


def wedge_coordinates(vectors: Sequence[Sequence[int]], n: int) -> tuple:
    """Coordinates of ``v_1 ^ ... ^ v_k`` in the lexicographic basis of Lambda^k Z^n."""
    from itertools import combinations

    k = len(vectors)
    cols = Matrix.from_rows(vectors, cols=n).T if k else Matrix.zeros(n, 0)
    return tuple(cols.submatrix(I, range(k)).det() for I in combinations(range(n), k))


# --------------------------------------------------------------------------
# Quaternions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Quaternion:
    re: Fraction = Fraction(0)
    i: Fraction = Fraction(0)
    j: Fraction = Fraction(0)
    k: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("re", "i", "j", "k"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def coerce(cls, x) -> "Quaternion":
        if isinstance(x, Quaternion):
            return x
        if isinstance(x, (list, tuple)):
            if len(x) != 4:
                raise ValueError(f"quaternion needs 4 components, got {x!r}")
            return cls(*x)
        return cls(as_rational(x))

    @property
    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.re, self.i, self.j, self.k)

    def __add__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.re, -self.i, -self.j, -self.k)

    def __sub__(self, other):
        return self + (-Quaternion.coerce(other))

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __mul__(self, other):
        return quat_mul(self, Quaternion.coerce(other))

    def __rmul__(self, other):
        return quat_mul(Quaternion.coerce(other), self)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.re, -self.i, -self.j, -self.k)

    def norm(self) -> Fraction:
        """Reduced norm ``q * conj(q)``, a nonnegative rational."""
        return self.re ** 2 + self.i ** 2 + self.j ** 2 + self.k ** 2

    def inverse(self) -> "Quaternion":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conjugate()
        return Quaternion(c.re / n, c.i / n, c.j / n, c.k / n)

    def is_real(self) -> bool:
        return self.i == self.j == self.k == 0

    def __bool__(self):
        return any(self.components)

    def __repr__(self):
        parts = []
        for c, unit in zip(self.components, ("", "i", "j", "k")):
            if c:
                parts.append(f"{c}{unit}")
        return "Quaternion(" + (" + ".join(parts) if parts else "0") + ")"


ONE = Quaternion(1)
QI = Quaternion(0, 1)
QJ = Quaternion(0, 0, 1)
QK = Quaternion(0, 0, 0, 1)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product with i^2 = j^2 = k^2 = ijk = -1."""
    a0, a1, a2, a3 = a.components
    b0, b1, b2, b3 = b.components
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def left_mult_matrix(q: Quaternion) -> Matrix:
    """4x4 real matrix of ``x -> q x`` in the basis (1, i, j, k)."""
    a, b, c, d = q.components
    return Matrix.from_rows([
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ])


@dataclass(frozen=True)
class QuatMatrix:
    rows: int
    cols: int
    entries: tuple[Quaternion, ...]  # row-major

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QuatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(x) != c for x in rows):
            raise ValueError("ragged quaternion matrix")
        return cls(r, c, tuple(Quaternion.coerce(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "QuatMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "QuatMatrix":
        return cls(r, c, (Quaternion(),) * (r * c))

    @classmethod
    def diag(cls, entries: Sequence) -> "QuatMatrix":
        n = len(entries)
        return cls.from_rows([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> Quaternion:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[Quaternion]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def __add__(self, other: "QuatMatrix") -> "QuatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return QuatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "QuatMatrix":
        return QuatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __sub__(self, other: "QuatMatrix") -> "QuatMatrix":
        return self + (-other)

    def __matmul__(self, other: "QuatMatrix") -> "QuatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = Quaternion()
                for t in range(self.cols):
                    acc = acc + quat_mul(self[i, t], other[t, j])
                out.append(acc)
        return QuatMatrix(self.rows, other.cols, tuple(out))

    def conj_transpose(self) -> "QuatMatrix":
        return QuatMatrix(self.cols, self.rows,
                          tuple(self[i, j].conjugate() for j in range(self.cols) for i in range(self.rows)))

    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_real(self) -> bool:
        return all(q.is_real() for q in self.entries)

    def realify(self) -> Matrix:
        return realify(self)

    def inverse(self) -> "QuatMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        return from_realified(realify(self).inverse())

    def apply(self, v: Sequence[Quaternion]) -> tuple[Quaternion, ...]:
        out = []
        for i in range(self.rows):
            acc = Quaternion()
            for t in range(self.cols):
                acc = acc + quat_mul(self[i, t], v[t])
            out.append(acc)
        return tuple(out)

    def __repr__(self):
        return f"QuatMatrix({self.to_rows()!r})"


def realify(A: QuatMatrix) -> Matrix:
    """The 4m x 4n real matrix of ``x -> A x`` on the right H-module H^n."""
    out = [[0] * (4 * A.cols) for _ in range(4 * A.rows)]
    for i in range(A.rows):
        for j in range(A.cols):
            L = left_mult_matrix(A[i, j])
            for a in range(4):
                out[4 * i + a][4 * j:4 * j + 4] = L.data[a]
    return Matrix.from_rows(out, cols=4 * A.cols)


def from_realified(R: Matrix) -> QuatMatrix:
    """Inverse of :func:`realify` on its image (reads column 0 of each 4x4 block)."""
    if R.rows % 4 or R.cols % 4:
        raise ValueError("realified matrices have dimensions divisible by 4")
    m, n = R.rows // 4, R.cols // 4
    rows = [[Quaternion(*(R[4 * i + a, 4 * j] for a in range(4))) for j in range(n)] for i in range(m)]
    Q = QuatMatrix.from_rows(rows) if m else QuatMatrix(0, n, ())
    if realify(Q) != R:
        raise ValueError("matrix is not H-linear")
    return Q


def quaternion_vector_to_real(v: Sequence[Quaternion]) -> tuple[Fraction, ...]:
    return tuple(c for q in v for c in q.components)


def real_to_quaternion_vector(x: Sequence) -> tuple[Quaternion, ...]:
    if len(x) % 4:
        raise ValueError("length must be divisible by 4")
    return tuple(Quaternion(*x[4 * t:4 * t + 4]) for t in range(len(x) // 4))


def rational_root(x: Fraction, k: int) -> Fraction | None:
    """Exact nonnegative k-th root of a nonnegative rational, or None if irrational."""
    x = as_rational(x)
    if x < 0:
        return None

    def iroot(n: int) -> int | None:
        r = _int_root(n, k)
        return r if r ** k == n else None

    num = iroot(x.numerator)
    den = iroot(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(n: int, k: int) -> int:
    if n < 2:
        return n
    if k == 2:
        return isqrt(n)
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class DieudonneDet:
    """Dieudonne determinant, or a flag when the fourth root is irrational."""

    realified_det: Fraction
    value: Fraction | None

    @property
    def is_rational(self) -> bool:
        return self.value is not None


def dieudonne_det(A: QuatMatrix) -> DieudonneDet:
    if not A.is_square():
        raise ValueError("Dieudonne determinant needs a square matrix")
    d = as_rational(realify(A).det())
    return DieudonneDet(d, rational_root(d, 4))


def imaginary_det(v1: Sequence[Quaternion], v2: Sequence[Quaternion]) -> Quaternion:
    """``sum v1 conj(v2) - v2 conj(v1)``; always purely imaginary.

    Diagnostic only; it is not the Dieudonne determinant.
    """
    acc = Quaternion()
    for a, b in zip(v1, v2):
        a, b = Quaternion.coerce(a), Quaternion.coerce(b)
        acc = acc + a * b.conjugate() - b * a.conjugate()
    return acc


J2 = QuatMatrix.from_rows([[0, 1], [-1, 0]])


def is_quaternionic_symplectic(C: QuatMatrix, J: QuatMatrix = J2) -> bool:
    """True iff ``C* J C == J``."""
    if not (C.is_square() and J.is_square()) or C.rows != J.rows:
        raise ValueError("C and J must be square of equal size")
    return C.conj_transpose() @ J @ C == J


def parse_quat_matrix(obj) -> QuatMatrix:
    """Parse nested lists (rows of 4-tuples or scalars) or the names I, -I, J, -J."""
    if isinstance(obj, QuatMatrix):
        return obj
    if isinstance(obj, str):
        named = {"I": QuatMatrix.identity(2), "-I": -QuatMatrix.identity(2), "J": J2, "-J": -J2}
        if obj.strip() in named:
            return named[obj.strip()]
        raise ValueError(f"unknown matrix name {obj!r}")
    return QuatMatrix.from_rows(obj)


def format_rational(x) -> str | int:
    x = as_rational(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def quat_matrix_to_json(A: QuatMatrix) -> list:
    return [[[format_rational(c) for c in q.components] for q in row] for row in A.to_rows()]


def vectors_equal(a: Iterable, b: Iterable) -> bool:
    return tuple(a) == tuple(b)
