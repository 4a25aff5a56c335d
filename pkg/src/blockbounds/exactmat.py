"""Exact rational dense linear algebra.

Matrices are immutable values over arbitrary-precision rationals
(``fractions.Fraction``); every operation returns a fresh matrix, so all
functions here are safe to call concurrently.  Determinants, inverses and
Smith normal forms run fraction-free (Bareiss style) on denominator-cleared
integer matrices to keep intermediate coefficient growth polynomial.

Floating point never enters any result.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .ntheory import is_prime

Rational = Fraction


class ShapeError(ValueError):
    """Dimension mismatch between matrix operands."""


class SingularMatrixError(ValueError):
    """A nonsingular matrix was required."""


class DomainError(ValueError):
    """Input outside the mathematical domain of the operation."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"entry {x!r} is not an exact rational") from exc
    raise DomainError(f"entry {x!r} is not an exact rational")


class RationalMatrix:
    """Dense matrix of exact rationals, row-major, immutable."""

    __slots__ = ("_rows",)

    def __init__(self, rows):
        data = tuple(tuple(_as_fraction(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ShapeError("matrix dimensions must be at least 1x1")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ShapeError("ragged rows")
        self._rows = data

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0])

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"RationalMatrix({self.rows}x{self.cols}: {body})"

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "RationalMatrix":
        return cls([[0] * c for _ in range(r)])

    @classmethod
    def filled(cls, r: int, c: int, value) -> "RationalMatrix":
        return cls([[value] * c for _ in range(r)])

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeError("addition needs equal shapes")
        return RationalMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)]
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix([[-a for a in row] for row in self._rows])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ShapeError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        bt = tuple(zip(*other._rows))
        return RationalMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self._rows]
        )

    def scale(self, c) -> "RationalMatrix":
        c = _as_fraction(c)
        return RationalMatrix([[c * a for a in row] for row in self._rows])

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self._rows)))

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ShapeError("trace needs a square matrix")
        return sum(self._rows[i][i] for i in range(self.rows))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == self._rows[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self._rows for x in row)


def mat_add(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    return a + b


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    return a @ b


def transpose(a: RationalMatrix) -> RationalMatrix:
    return a.transpose()


def trace(a: RationalMatrix) -> Fraction:
    return a.trace()


def kron(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Kronecker product in block (lexicographic) order: a's entry scales b."""
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                aij = a[i, j]
                row.extend(aij * b[k, l] for l in range(b.cols))
            out.append(row)
    return RationalMatrix(out)


def direct_sum(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    out = []
    for i in range(a.rows):
        out.append(list(a.row(i)) + [Fraction(0)] * b.cols)
    for k in range(b.rows):
        out.append([Fraction(0)] * a.cols + list(b.row(k)))
    return RationalMatrix(out)


def _cleared_int_rows(a: RationalMatrix) -> tuple[list[list[int]], int]:
    """Return (s*a as int rows, s) for the common denominator s > 0."""
    s = lcm(*(x.denominator for row in a for x in row))
    rows = [[int(x * s) for x in row] for row in a]
    return rows, s


def _int_det_bareiss(m: list[list[int]]) -> int:
    """Destructive fraction-free determinant of an integer matrix."""
    n = len(m)
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
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            ri, rk = m[i], m[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - mik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return sign * m[-1][-1]


def determinant(a: RationalMatrix) -> Fraction:
    if not a.is_square():
        raise ShapeError("determinant needs a square matrix")
    ints, s = _cleared_int_rows(a)
    return Fraction(_int_det_bareiss(ints), s ** a.rows)


def inverse(a: RationalMatrix) -> RationalMatrix:
    """Exact inverse via fraction-free forward elimination + back substitution."""
    if not a.is_square():
        raise ShapeError("inverse needs a square matrix")
    n = a.rows
    ints, s = _cleared_int_rows(a)
    # augment with s*I so the final result is the inverse of a itself
    for i in range(n):
        ints[i].extend(s if j == i else 0 for j in range(n))
    prev = 1
    for k in range(n - 1):
        if ints[k][k] == 0:
            for i in range(k + 1, n):
                if ints[i][k] != 0:
                    ints[k], ints[i] = ints[i], ints[k]
                    break
            else:
                raise SingularMatrixError("matrix is singular")
        pk = ints[k][k]
        for i in range(k + 1, n):
            mik = ints[i][k]
            ri, rk = ints[i], ints[k]
            for j in range(k + 1, 2 * n):
                ri[j] = (pk * ri[j] - mik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    if ints[n - 1][n - 1] == 0:
        raise SingularMatrixError("matrix is singular")
    # exact rational back substitution on the augmented columns
    sol = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n - 1, -1, -1):
        for c in range(n):
            acc = Fraction(ints[i][n + c])
            for j in range(i + 1, n):
                acc -= ints[i][j] * sol[j][c]
            sol[i][c] = acc / ints[i][i]
    return RationalMatrix(sol)


def rank(a: RationalMatrix) -> int:
    """Rank over the rationals (exact Gaussian elimination)."""
    m = [list(row) for row in a]
    nrows, ncols = a.rows, a.cols
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        inv_p = 1 / pr[c]
        for i in range(r + 1, nrows):
            f = m[i][c] * inv_p
            if f:
                mi = m[i]
                for j in range(c, ncols):
                    mi[j] -= f * pr[j]
        r += 1
        if r == nrows:
            break
    return r


def elementary_divisors(a: RationalMatrix) -> list[int]:
    """Smith normal form diagonal d1 | d2 | ... | dn of an integer matrix."""
    if not a.is_square():
        raise ShapeError("elementary divisors need a square matrix")
    if not a.is_integral():
        raise DomainError("elementary divisors are defined for integer matrices")
    n = a.rows
    m = [[int(x) for x in row] for row in a]
    divs = []
    for t in range(n):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    v = m[i][j]
                    if v != 0 and (best is None or abs(v) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                raise SingularMatrixError("matrix is singular")
            bi, bj = best
            m[t], m[bi] = m[bi], m[t]
            for row in m:
                row[t], row[bj] = row[bj], row[t]
            if m[t][t] < 0:
                m[t] = [-x for x in m[t]]
            p = m[t][t]
            clean = True
            for i in range(t + 1, n):
                q = m[i][t] // p
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                if m[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = m[t][j] // p
                if q:
                    for row in m:
                        row[j] -= q * row[t]
                if m[t][j]:
                    clean = False
            if not clean:
                continue
            viol = next(
                (
                    i
                    for i in range(t + 1, n)
                    if any(m[i][j] % p for j in range(t + 1, n))
                ),
                None,
            )
            if viol is not None:
                m[t] = [x + y for x, y in zip(m[t], m[viol])]
                continue
            break
        divs.append(m[t][t])
    return divs


def leading_principal_pivots(a: RationalMatrix) -> list[Fraction]:
    """Leading principal minors D1..Dk, stopping after the first <= 0.

    Runs a swap-free fraction-free elimination whose pivots are exactly the
    leading principal minors; for symmetric matrices this decides positive
    definiteness (Sylvester).
    """
    if not a.is_square():
        raise ShapeError("square matrix required")
    ints, s = _cleared_int_rows(a)
    n = a.rows
    minors: list[Fraction] = []
    prev = 1
    for k in range(n):
        piv = ints[k][k]
        minors.append(Fraction(piv, s ** (k + 1)))
        if piv <= 0 or k == n - 1:
            break
        for i in range(k + 1, n):
            mik = ints[i][k]
            ri, rk = ints[i], ints[k]
            for j in range(k + 1, n):
                ri[j] = (piv * ri[j] - mik * rk[j]) // prev
            ri[k] = 0
        prev = piv
    return minors


def is_positive_definite(a: RationalMatrix) -> bool:
    """True iff a is symmetric with all leading principal minors positive."""
    if not a.is_symmetric():
        return False
    minors = leading_principal_pivots(a)
    return len(minors) == a.rows and all(m > 0 for m in minors)


class CartanData:
    """Integer symmetric positive definite matrix with block metadata.

    ``defect``, when given, pins the largest elementary divisor to p**defect.
    """

    __slots__ = ("matrix", "p", "defect")

    def __init__(self, matrix: RationalMatrix, p: int, defect: int | None = None):
        if not is_prime(p):
            raise DomainError(f"{p} is not a prime")
        if not matrix.is_square():
            raise DomainError("Cartan matrix must be square")
        if not matrix.is_integral():
            raise DomainError("Cartan matrix must have integer entries")
        if any(x < 0 for row in matrix for x in row):
            raise DomainError("Cartan matrix entries must be nonnegative")
        if not matrix.is_symmetric():
            raise DomainError("Cartan matrix must be symmetric")
        if not is_positive_definite(matrix):
            raise DomainError("Cartan matrix must be positive definite")
        if defect is not None:
            if defect < 0:
                raise DomainError("defect must be nonnegative")
            top = elementary_divisors(matrix)[-1]
            if top != p**defect:
                raise DomainError(
                    f"largest elementary divisor {top} is not p^defect = {p**defect}"
                )
        self.matrix = matrix
        self.p = p
        self.defect = defect

    @property
    def l(self) -> int:
        return self.matrix.rows

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CartanData)
            and self.matrix == other.matrix
            and self.p == other.p
            and self.defect == other.defect
        )

    def __repr__(self) -> str:
        return f"CartanData(l={self.l}, p={self.p}, defect={self.defect})"


def matrix_to_record(a: RationalMatrix) -> dict:
    """Shared matrix text format; entries are canonical 'n' or 'n/d' strings."""
    return {
        "rows": a.rows,
        "cols": a.cols,
        "entries": [[str(x) for x in row] for row in a],
    }


def matrix_from_record(rec: dict) -> RationalMatrix:
    try:
        rows, cols, entries = rec["rows"], rec["cols"], rec["entries"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"matrix record is missing field {exc}") from exc
    m = RationalMatrix(entries)
    if m.rows != rows or m.cols != cols:
        raise DomainError(
            f"matrix record claims {rows}x{cols} but has {m.rows}x{m.cols} entries"
        )
    return m
