"""Exact finite field arithmetic and dense linear algebra.

Field elements are plain Python ints in canonical form:

- prime fields GF(p): the residue 0..p-1
- binary extension fields GF(2^m): the integer whose bit i is the
  coefficient of x^i in the polynomial basis, 0..2^m-1

A ``Field`` instance carries the arithmetic; matrices tag themselves with
their field and refuse to combine across fields.  There are no floating
point numbers and no tolerances anywhere: every comparison is exact.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence


# Minimum-weight irreducible polynomials over GF(2), bit i = coeff of x^i.
# Each is re-verified by the exhaustive divisor test at construction.
_DEFAULT_REDUCTION_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000000001001,
    13: 0b10000000011011,
    14: 0b100000000101011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}

_MAX_BINARY_DEGREE = 16
_MAX_PRIME = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _gf2_poly_mod(a: int, b: int) -> int:
    """Remainder of carry-less polynomial division a mod b over GF(2)."""
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def _gf2_poly_irreducible(poly: int, m: int) -> bool:
    """Exhaustive divisor test: no factor of degree 1..m//2 divides poly."""
    if poly.bit_length() - 1 != m:
        return False
    for deg in range(1, m // 2 + 1):
        for low in range(1 << deg):
            divisor = (1 << deg) | low
            if _gf2_poly_mod(poly, divisor) == 0:
                return False
    return True


class Field:
    """A finite field GF(p) or GF(2^m) with exact element arithmetic.

    Parameters
    ----------
    order : int
        Field size.  A prime below 2^16 or a power of two up to 2^16.
    reduction_poly : int or None
        For GF(2^m): the irreducible reduction polynomial as a bitmask
        (bit m must be set).  Defaults to a built-in minimum-weight
        irreducible polynomial.  Ignored for prime fields.
    """

    __slots__ = ("kind", "order", "characteristic", "degree", "reduction_poly")

    def __init__(self, order: int, reduction_poly: Optional[int] = None):
        if order >= 2 and (order & (order - 1)) == 0 and order > 2:
            m = order.bit_length() - 1
            if m > _MAX_BINARY_DEGREE:
                raise ValueError(f"GF(2^{m}) exceeds the supported degree {_MAX_BINARY_DEGREE}")
            if reduction_poly is None:
                reduction_poly = _DEFAULT_REDUCTION_POLY[m]
            if not _gf2_poly_irreducible(reduction_poly, m):
                raise ValueError(
                    f"reduction polynomial 0b{reduction_poly:b} is not irreducible of degree {m}"
                )
            self.kind = "binary"
            self.order = order
            self.characteristic = 2
            self.degree = m
            self.reduction_poly = reduction_poly
        elif _is_prime(order):
            if order >= _MAX_PRIME:
                raise ValueError(f"prime order {order} exceeds the supported bound 2^16")
            self.kind = "prime"
            self.order = order
            self.characteristic = order
            self.degree = 1
            self.reduction_poly = None
        else:
            raise ValueError(f"{order} is neither a prime below 2^16 nor a power of two up to 2^16")

    # -- identity ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Field)
            and self.kind == other.kind
            and self.order == other.order
            and self.reduction_poly == other.reduction_poly
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.order, self.reduction_poly))

    def __repr__(self) -> str:
        if self.kind == "binary":
            return f"GF(2^{self.degree})" if self.degree > 1 else "GF(2)"
        return f"GF({self.order})"

    # -- element arithmetic ------------------------------------------------

    def element(self, value: int) -> int:
        """Validate and return a canonical element of this field."""
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"{value!r} is not a field element of {self}")
        if not 0 <= value < self.order:
            raise ValueError(f"{value} is out of range for {self}; operands must share one field")
        return value

    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        self.element(a)
        self.element(b)
        if self.kind == "binary" or self.order == 2:
            return a ^ b
        return (a + b) % self.order

    def sub(self, a: int, b: int) -> int:
        self.element(a)
        self.element(b)
        if self.kind == "binary" or self.order == 2:
            return a ^ b
        return (a - b) % self.order

    def neg(self, a: int) -> int:
        self.element(a)
        if self.kind == "binary" or self.order == 2:
            return a
        return (-a) % self.order

    def mul(self, a: int, b: int) -> int:
        self.element(a)
        self.element(b)
        if self.kind == "prime":
            return (a * b) % self.order
        return self._xmul(a, b)

    def inv(self, a: int) -> int:
        """Multiplicative inverse; raises ZeroDivisionError for 0."""
        self.element(a)
        if a == 0:
            raise ZeroDivisionError(f"zero has no multiplicative inverse in {self}")
        if self.kind == "prime":
            return pow(a, self.order - 2, self.order)
        # a^(2^m - 2) by square and multiply
        result, base, e = 1, a, self.order - 2
        while e:
            if e & 1:
                result = self._xmul(result, base)
            base = self._xmul(base, base)
            e >>= 1
        return result

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def _xmul(self, a: int, b: int) -> int:
        # carry-less multiply with on-the-fly reduction; inputs already valid
        r = 0
        top = self.order
        poly = self.reduction_poly
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= poly
        return r


def GF(order: int, reduction_poly: Optional[int] = None) -> Field:
    """Convenience constructor, e.g. ``GF(2)``, ``GF(16)``, ``GF(7)``."""
    return Field(order, reduction_poly)


class Matrix:
    """Immutable dense matrix over a :class:`Field`.

    Rows are tuples of canonical int elements.  All operations return new
    matrices; instances are safe to share between threads.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Iterable[Iterable[int]]):
        rows = tuple(tuple(field.element(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows in matrix literal")
        else:
            width = 0
        self.field = field
        self.rows = len(rows)
        self.cols = width
        self.data = rows

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, ((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, (tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    # -- plumbing ------------------------------------------------------------

    def __getitem__(self, i: int) -> Sequence[int]:
        return self.data[i]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.data == other.data
            and self.cols == other.cols
        )

    def __hash__(self) -> int:
        return hash((self.field, self.cols, self.data))

    def __repr__(self) -> str:
        body = "; ".join(",".join(str(x) for x in row) for row in self.data)
        return f"Matrix({self.field!r}, {self.rows}x{self.cols}: {body})"

    def _check_same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValueError(f"mixed fields: {self.field} vs {other.field}")

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} + {other.rows}x{other.cols}")
        add = self.field.add
        return Matrix(
            self.field,
            (tuple(add(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data)),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} - {other.rows}x{other.cols}")
        sub = self.field.sub
        return Matrix(
            self.field,
            (tuple(sub(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data)),
        )

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, (tuple(neg(a) for a in row) for row in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        add, mul = f.add, f.mul
        cols = tuple(zip(*other.data)) if other.data else ()
        out = []
        for row in self.data:
            out_row = []
            for col in cols:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = add(acc, mul(a, b))
                out_row.append(acc)
            out.append(tuple(out_row))
        return Matrix(self.field, out)

    def scale(self, c: int) -> "Matrix":
        c = self.field.element(c)
        mul = self.field.mul
        return Matrix(self.field, (tuple(mul(c, a) for a in row) for row in self.data))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, zip(*self.data)) if self.data else Matrix(self.field, [])

    # -- slicing and stacking ---------------------------------------------------

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(self.field, (tuple(row[j] for j in indices) for row in self.data))

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(self.field, (self.data[i] for i in indices))

    @staticmethod
    def hstack(matrices: Sequence["Matrix"]) -> "Matrix":
        first = matrices[0]
        for m in matrices[1:]:
            first._check_same_field(m)
            if m.rows != first.rows:
                raise ValueError("hstack needs equal row counts")
        return Matrix(
            first.field,
            (tuple(x for m in matrices for x in m.data[i]) for i in range(first.rows)),
        )

    @staticmethod
    def vstack(matrices: Sequence["Matrix"]) -> "Matrix":
        first = matrices[0]
        for m in matrices[1:]:
            first._check_same_field(m)
            if m.cols != first.cols:
                raise ValueError("vstack needs equal column counts")
        return Matrix(first.field, (row for m in matrices for row in m.data))

    @staticmethod
    def block(grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        return Matrix.vstack([Matrix.hstack(row) for row in grid])

    # -- elimination --------------------------------------------------------------

    def _echelon(self, reduced: bool) -> tuple:
        """Forward elimination with fixed pivoting: columns left to right,
        first row below the current one with a nonzero entry wins."""
        f = self.field
        sub, mul, inv = f.sub, f.mul, f.inv
        work = [list(row) for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot_row = None
            for i in range(r, self.rows):
                if work[i][c] != 0:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            work[r], work[pivot_row] = work[pivot_row], work[r]
            scale = inv(work[r][c])
            if scale != 1:
                work[r] = [mul(scale, x) for x in work[r]]
            targets = range(self.rows) if reduced else range(r + 1, self.rows)
            for i in targets:
                if i != r and work[i][c] != 0:
                    factor = work[i][c]
                    base = work[r]
                    work[i] = [sub(x, mul(factor, y)) for x, y in zip(work[i], base)]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return work, pivots

    def rank(self) -> int:
        """Dimension of the row space."""
        _, pivots = self._echelon(reduced=False)
        return len(pivots)

    def rref(self) -> tuple:
        """Reduced row echelon form and the pivot column list."""
        work, pivots = self._echelon(reduced=True)
        return Matrix(self.field, work), tuple(pivots)

    def solve_right(self, rhs: "Matrix") -> Optional["Matrix"]:
        """Canonical solution X of self @ X = rhs, or None if inconsistent.

        Free variables are fixed to zero, so the solution is reproducible
        run to run.
        """
        self._check_same_field(rhs)
        if rhs.rows != self.rows:
            raise ValueError("solve_right needs matching row counts")
        aug = Matrix.hstack([self, rhs])
        reduced, pivots = aug.rref()
        for c in pivots:
            if c >= self.cols:
                return None
        out = [[0] * rhs.cols for _ in range(self.cols)]
        for i, c in enumerate(pivots):
            out[c] = list(reduced.data[i][self.cols:])
        return Matrix(self.field, out)

    def inverse(self) -> Optional["Matrix"]:
        """Two-sided inverse, or None when singular.

        A X = I is consistent only for full-rank square A, so the
        solve_right consistency signal doubles as the singularity test.
        """
        if not self.is_square:
            raise ValueError("inverse needs a square matrix")
        return self.solve_right(Matrix.identity(self.field, self.rows))
