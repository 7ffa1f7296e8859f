"""Exact rational matrices: determinants, inverses and linear-system solvers.

Every value is a ``fractions.Fraction`` (arbitrary precision, always reduced,
denominator > 0), so results are exact and reproducible.  Matrices are
immutable; all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]


class RatMatError(Exception):
    """Base class for matrix-algebra errors."""


class NotSquare(RatMatError):
    pass


class TriangleRequires3x3(RatMatError):
    pass


class DimensionMismatch(RatMatError):
    pass


class Singular(RatMatError):
    pass


class NoUniqueSolution(RatMatError):
    pass


class DetMethod(Enum):
    TRIANGLE = "triangle"
    COFACTOR = "cofactor"
    TRIANGULAR_REDUCTION = "triangular_reduction"


class InvMethod(Enum):
    ADJUGATE = "adjugate"
    GAUSS = "gauss"


class SolveMethod(Enum):
    CRAMER = "cramer"
    INVERSE_MATRIX = "inverse_matrix"
    GAUSS = "gauss"


def rat(value: RationalLike) -> Fraction:
    """Coerce ints, strings like ``"52/17"`` and Fractions to Fraction."""
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class RatMatrix:
    """Dense matrix over the rationals, row-major immutable storage."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be >= 1")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "RatMatrix":
        nrows = len(rows)
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(nrows, ncols, tuple(rat(v) for r in rows for v in r))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.at(i, j) for i in range(self.rows))


def matrix(rows: Sequence[Sequence[RationalLike]]) -> RatMatrix:
    return RatMatrix.from_rows(rows)


def identity(n: int) -> RatMatrix:
    return RatMatrix(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))


def zero(rows: int, cols: int) -> RatMatrix:
    return RatMatrix(rows, cols, (Fraction(0),) * (rows * cols))


def column_vector(values: Sequence[RationalLike]) -> RatMatrix:
    return RatMatrix(len(values), 1, tuple(rat(v) for v in values))


@dataclass(frozen=True)
class LinSystem:
    """Square system a·x = b with symbolic variable names for display."""

    a: RatMatrix
    b: RatMatrix
    var_names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.a.is_square():
            raise NotSquare("coefficient matrix must be square")
        if self.b.rows != self.a.rows or self.b.cols != 1:
            raise DimensionMismatch("right-hand side must be an n×1 column")
        if not self.var_names:
            object.__setattr__(
                self, "var_names", tuple(f"x{i + 1}" for i in range(self.a.rows))
            )
        elif len(self.var_names) != self.a.rows:
            raise DimensionMismatch("one variable name per unknown required")

    @property
    def n(self) -> int:
        return self.a.rows


def mat_add(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise DimensionMismatch(f"{a.rows}×{a.cols} + {b.rows}×{b.cols}")
    return RatMatrix(a.rows, a.cols, tuple(x + y for x, y in zip(a.entries, b.entries)))


def mat_scale(c: RationalLike, m: RatMatrix) -> RatMatrix:
    c = rat(c)
    return RatMatrix(m.rows, m.cols, tuple(c * x for x in m.entries))


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Matrix product; raises DimensionMismatch when shapes do not conform."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}×{a.cols} by {b.rows}×{b.cols}")
    entries = []
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(b.cols):
            entries.append(sum((arow[k] * b.at(k, j) for k in range(a.cols)), Fraction(0)))
    return RatMatrix(a.rows, b.cols, tuple(entries))


def _det_triangle(m: RatMatrix) -> Fraction:
    # 6-term closed formula, defined for 3×3 only
    a, b, c = m.row(0)
    d, e, f = m.row(1)
    g, h, i = m.row(2)
    return a * e * i + b * f * g + c * d * h - c * e * g - b * d * i - a * f * h


def _minor(m: RatMatrix, drop_row: int, drop_col: int) -> RatMatrix:
    entries = tuple(
        m.at(i, j)
        for i in range(m.rows)
        if i != drop_row
        for j in range(m.cols)
        if j != drop_col
    )
    return RatMatrix(m.rows - 1, m.cols - 1, entries)


def _det_cofactor(m: RatMatrix) -> Fraction:
    # expansion always along the first row
    if m.rows == 1:
        return m.at(0, 0)
    total = Fraction(0)
    sign = 1
    for j in range(m.cols):
        a = m.at(0, j)
        if a != 0:
            total += sign * a * _det_cofactor(_minor(m, 0, j))
        sign = -sign
    return total


def _det_reduction(m: RatMatrix) -> Fraction:
    # plain rational elimination; pivot = first nonzero entry in the column,
    # one sign flip per row swap
    n = m.rows
    rows = m.to_rows()
    sign = 1
    for col in range(n):
        pivot_row = None
        for i in range(col, n):
            if rows[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            sign = -sign
        pivot = rows[col][col]
        for i in range(col + 1, n):
            factor = rows[i][col] / pivot
            if factor != 0:
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[col])]
    result = Fraction(sign)
    for i in range(n):
        result *= rows[i][i]
    return result


def det(m: RatMatrix, method: DetMethod = DetMethod.COFACTOR) -> Fraction:
    """Exact determinant; all admissible methods agree on the same input."""
    if not m.is_square():
        raise NotSquare(f"determinant of a {m.rows}×{m.cols} matrix")
    if method is DetMethod.TRIANGLE:
        if m.rows != 3:
            raise TriangleRequires3x3(f"triangle rule on a {m.rows}×{m.cols} matrix")
        return _det_triangle(m)
    if method is DetMethod.COFACTOR:
        return _det_cofactor(m)
    return _det_reduction(m)


def _inverse_adjugate(m: RatMatrix) -> RatMatrix:
    d = _det_cofactor(m)
    if d == 0:
        raise Singular("matrix has determinant 0")
    n = m.rows
    if n == 1:
        return RatMatrix(1, 1, (Fraction(1) / m.at(0, 0),))
    # adjugate = transposed cofactor matrix; entry (i,j) of the inverse is
    # the (j,i) cofactor divided by det
    entries = []
    for i in range(n):
        for j in range(n):
            cof = (-1) ** (i + j) * _det_cofactor(_minor(m, j, i))
            entries.append(cof / d)
    return RatMatrix(n, n, tuple(entries))


def _inverse_gauss(m: RatMatrix) -> RatMatrix:
    n = m.rows
    left = m.to_rows()
    right = identity(n).to_rows()
    for col in range(n):
        pivot_row = None
        for i in range(col, n):
            if left[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            raise Singular("matrix has determinant 0")
        if pivot_row != col:
            left[col], left[pivot_row] = left[pivot_row], left[col]
            right[col], right[pivot_row] = right[pivot_row], right[col]
        pivot = left[col][col]
        left[col] = [x / pivot for x in left[col]]
        right[col] = [x / pivot for x in right[col]]
        for i in range(n):
            if i != col and left[i][col] != 0:
                factor = left[i][col]
                left[i] = [x - factor * y for x, y in zip(left[i], left[col])]
                right[i] = [x - factor * y for x, y in zip(right[i], right[col])]
    return RatMatrix.from_rows(right)


def inverse(m: RatMatrix, method: InvMethod = InvMethod.GAUSS) -> RatMatrix:
    """Exact inverse; raises Singular when det = 0."""
    if not m.is_square():
        raise NotSquare(f"inverse of a {m.rows}×{m.cols} matrix")
    if method is InvMethod.ADJUGATE:
        return _inverse_adjugate(m)
    return _inverse_gauss(m)


def _solve_cramer(sys: LinSystem) -> RatMatrix:
    d = _det_reduction(sys.a)
    if d == 0:
        raise Singular("coefficient matrix has determinant 0")
    values = []
    for j in range(sys.n):
        cols = sys.a.to_rows()
        for i in range(sys.n):
            cols[i][j] = sys.b.at(i, 0)
        values.append(_det_reduction(RatMatrix.from_rows(cols)) / d)
    return column_vector(values)


def _solve_inverse(sys: LinSystem) -> RatMatrix:
    try:
        inv = _inverse_gauss(sys.a)
    except Singular:
        raise Singular("coefficient matrix has determinant 0")
    return mat_mul(inv, sys.b)


def _solve_gauss(sys: LinSystem) -> RatMatrix:
    n = sys.n
    aug = [list(sys.a.row(i)) + [sys.b.at(i, 0)] for i in range(n)]
    for col in range(n):
        pivot_row = None
        for i in range(col, n):
            if aug[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            # covers both inconsistent and underdetermined square systems
            raise NoUniqueSolution("no unique solution")
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        for i in range(col + 1, n):
            factor = aug[i][col] / pivot
            if factor != 0:
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[col])]
    values = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = aug[i][n] - sum((aug[i][k] * values[k] for k in range(i + 1, n)), Fraction(0))
        values[i] = acc / aug[i][i]
    return column_vector(values)


def solve(sys: LinSystem, method: SolveMethod = SolveMethod.GAUSS) -> RatMatrix:
    """Solve a·x = b exactly; the three methods agree on nonsingular systems."""
    if method is SolveMethod.CRAMER:
        return _solve_cramer(sys)
    if method is SolveMethod.INVERSE_MATRIX:
        return _solve_inverse(sys)
    return _solve_gauss(sys)


def mat_poly(coeffs: Sequence[RationalLike], m: RatMatrix) -> RatMatrix:
    """Evaluate a polynomial at a square matrix, highest coefficient first.

    The constant term contributes c·I; evaluation is Horner's scheme.
    """
    if not m.is_square():
        raise NotSquare(f"polynomial of a {m.rows}×{m.cols} matrix")
    if not coeffs:
        raise ValueError("coeffs must be non-empty")
    cs = [rat(c) for c in coeffs]
    result = mat_scale(cs[0], identity(m.rows))
    for c in cs[1:]:
        result = mat_add(mat_mul(result, m), mat_scale(c, identity(m.rows)))
    return result


def solve_matrix_eq(a: RatMatrix, b: RatMatrix, c: RatMatrix) -> RatMatrix:
    """Return X with a·b·X = c, i.e. X = (a·b)⁻¹·c."""
    if not a.is_square() or not b.is_square() or a.rows != b.rows:
        raise DimensionMismatch("a and b must be square and of equal size")
    if c.rows != a.rows:
        raise DimensionMismatch("c must have as many rows as a")
    ab = mat_mul(a, b)
    return mat_mul(_inverse_gauss(ab), c)
