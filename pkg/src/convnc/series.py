"""Rational power series and truncated matrix power series.

A rational power series is a fraction p(z) / q(z) of polynomials over a
finite field whose denominator has constant term 1; every such fraction
expands into an ordinary power series in the delay variable z.  Kernels
are kept in this exact fractional form, while all heavy computation runs
on truncated coefficient sequences (matrix power series).

Polynomials are tuples of canonical field ints, coefficient of z^t at
index t, with no trailing zeros; the zero polynomial is the empty tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .field import Field, Matrix


class NotExpandableError(ValueError):
    """Raised when a Neumann series has no finite coefficient expansion."""


# ---------------------------------------------------------------------------
# polynomial helpers
# ---------------------------------------------------------------------------

def poly_trim(coeffs: Sequence[int]) -> tuple:
    c = tuple(coeffs)
    end = len(c)
    while end and c[end - 1] == 0:
        end -= 1
    return c[:end]


def poly_add(field: Field, a: Sequence[int], b: Sequence[int]) -> tuple:
    n = max(len(a), len(b))
    pa = tuple(a) + (0,) * (n - len(a))
    pb = tuple(b) + (0,) * (n - len(b))
    return poly_trim(field.add(x, y) for x, y in zip(pa, pb))


def poly_sub(field: Field, a: Sequence[int], b: Sequence[int]) -> tuple:
    n = max(len(a), len(b))
    pa = tuple(a) + (0,) * (n - len(a))
    pb = tuple(b) + (0,) * (n - len(b))
    return poly_trim(field.sub(x, y) for x, y in zip(pa, pb))


def poly_mul(field: Field, a: Sequence[int], b: Sequence[int]) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = field.add(out[i + j], field.mul(x, y))
    return poly_trim(out)


def poly_scale(field: Field, c: int, a: Sequence[int]) -> tuple:
    return poly_trim(field.mul(c, x) for x in a)


def poly_divmod(field: Field, a: Sequence[int], b: Sequence[int]) -> tuple:
    """Quotient and remainder of polynomial division; b must be nonzero."""
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(a))
    q = [0] * max(0, len(rem) - len(b) + 1)
    inv_lead = field.inv(b[-1])
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        factor = field.mul(rem[-1], inv_lead)
        q[shift] = factor
        for i, bc in enumerate(b):
            rem[shift + i] = field.sub(rem[shift + i], field.mul(factor, bc))
        while rem and rem[-1] == 0:
            rem.pop()
    return poly_trim(q), poly_trim(rem)


def poly_gcd(field: Field, a: Sequence[int], b: Sequence[int]) -> tuple:
    """Monic greatest common divisor."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        _, r = poly_divmod(field, a, b)
        a, b = b, r
    if a:
        a = poly_scale(field, field.inv(a[-1]), a)
    return a


def poly_shift(a: Sequence[int], k: int) -> tuple:
    """Multiply by z^k."""
    a = poly_trim(a)
    return ((0,) * k + a) if a else ()


# ---------------------------------------------------------------------------
# rational power series
# ---------------------------------------------------------------------------

class RationalSeries:
    """A reduced fraction p(z)/q(z) with q(0) = 1 over a finite field.

    The normalized form is unique, so structural equality decides series
    equality.  Expansion to any truncation order is an explicit step.
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field: Field, num: Sequence[int], den: Sequence[int] = (1,)):
        num = poly_trim(field.element(c) for c in num)
        den = poly_trim(field.element(c) for c in den)
        if not den:
            raise ZeroDivisionError("rational series denominator is zero")
        g = poly_gcd(field, num, den)
        if g and g != (1,):
            num, _ = poly_divmod(field, num, g)
            den, _ = poly_divmod(field, den, g)
        if den[0] == 0:
            raise ValueError(
                "denominator constant term is zero: not a rational power series"
            )
        if den[0] != 1:
            scale = field.inv(den[0])
            num = poly_scale(field, scale, num)
            den = poly_scale(field, scale, den)
        self.field = field
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> "RationalSeries":
        return cls(field, ())

    @classmethod
    def one(cls, field: Field) -> "RationalSeries":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: Field, c: int) -> "RationalSeries":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: Field, degree: int, coeff: int = 1) -> "RationalSeries":
        return cls(field, poly_shift((coeff,), degree))

    # -- structure -----------------------------------------------------------

    def _check(self, other: "RationalSeries") -> None:
        if self.field != other.field:
            raise ValueError(f"mixed fields: {self.field} vs {other.field}")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RationalSeries)
            and self.field == other.field
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.field, self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalSeries({self.field!r}, num={self.num}, den={self.den})"

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_polynomial(self) -> bool:
        return self.den == (1,)

    def constant_coefficient(self) -> int:
        return self.num[0] if self.num else 0

    # -- ring operations --------------------------------------------------------

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        self._check(other)
        num = poly_add(
            self.field,
            poly_mul(self.field, self.num, other.den),
            poly_mul(self.field, other.num, self.den),
        )
        return RationalSeries(self.field, num, poly_mul(self.field, self.den, other.den))

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        self._check(other)
        num = poly_sub(
            self.field,
            poly_mul(self.field, self.num, other.den),
            poly_mul(self.field, other.num, self.den),
        )
        return RationalSeries(self.field, num, poly_mul(self.field, self.den, other.den))

    def __mul__(self, other: "RationalSeries") -> "RationalSeries":
        self._check(other)
        return RationalSeries(
            self.field,
            poly_mul(self.field, self.num, other.num),
            poly_mul(self.field, self.den, other.den),
        )

    def __neg__(self) -> "RationalSeries":
        return RationalSeries(self.field, poly_scale(self.field, self.field.neg(1), self.num), self.den)

    def expand(self, horizon: int) -> tuple:
        """Coefficients c_0..c_horizon of the power series expansion.

        With q(0) = 1 the recurrence c_t = p_t - sum_{i>=1} q_i c_{t-i}
        needs no division.
        """
        if horizon < 0:
            raise ValueError("horizon must be non-negative")
        f = self.field
        out = []
        for t in range(horizon + 1):
            c = self.num[t] if t < len(self.num) else 0
            for i in range(1, min(t, len(self.den) - 1) + 1):
                qi = self.den[i]
                if qi:
                    c = f.sub(c, f.mul(qi, out[t - i]))
            out.append(c)
        return tuple(out)


# ---------------------------------------------------------------------------
# matrix power series
# ---------------------------------------------------------------------------

class MatrixSeries:
    """Truncated matrix power series: coefficient matrices M_0..M_T.

    Two series are equal when their coefficients agree term by term; a
    longer series equals a shorter one exactly when its tail beyond the
    shared horizon is zero, so zero padding never breaks equality.
    """

    __slots__ = ("field", "rows", "cols", "coeffs")

    def __init__(self, coeffs: Sequence[Matrix]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a matrix series needs at least the constant coefficient")
        first = coeffs[0]
        for m in coeffs[1:]:
            if m.field != first.field:
                raise ValueError("mixed fields in matrix series coefficients")
            if (m.rows, m.cols) != (first.rows, first.cols):
                raise ValueError("coefficient matrices must share dimensions")
        self.field = first.field
        self.rows = first.rows
        self.cols = first.cols
        self.coeffs = coeffs

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int, horizon: int) -> "MatrixSeries":
        z = Matrix.zeros(field, rows, cols)
        return cls([z] * (horizon + 1))

    @classmethod
    def identity(cls, field: Field, n: int, horizon: int) -> "MatrixSeries":
        coeffs = [Matrix.identity(field, n)]
        coeffs.extend(Matrix.zeros(field, n, n) for _ in range(horizon))
        return cls(coeffs)

    @classmethod
    def from_rational(
        cls, entries: Sequence[Sequence[RationalSeries]], horizon: int
    ) -> "MatrixSeries":
        """Expand a matrix of rational series entrywise up to a horizon."""
        grid = [[e.expand(horizon) for e in row] for row in entries]
        field = entries[0][0].field
        coeffs = [
            Matrix(field, [[cell[t] for cell in row] for row in grid])
            for t in range(horizon + 1)
        ]
        return cls(coeffs)

    @property
    def horizon(self) -> int:
        return len(self.coeffs) - 1

    def at(self, t: int) -> Matrix:
        """Coefficient of z^t, zero beyond the stored horizon."""
        if t < 0:
            raise ValueError("negative power of z")
        if t <= self.horizon:
            return self.coeffs[t]
        return Matrix.zeros(self.field, self.rows, self.cols)

    def constant(self) -> Matrix:
        return self.coeffs[0]

    def truncate(self, horizon: int) -> "MatrixSeries":
        """Cut or zero-pad to the requested horizon."""
        return MatrixSeries([self.at(t) for t in range(horizon + 1)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixSeries):
            return NotImplemented
        if self.field != other.field or (self.rows, self.cols) != (other.rows, other.cols):
            return False
        top = max(self.horizon, other.horizon)
        return all(self.at(t) == other.at(t) for t in range(top + 1))

    def __hash__(self) -> int:
        trimmed = list(self.coeffs)
        while len(trimmed) > 1 and trimmed[-1].is_zero:
            trimmed.pop()
        return hash((self.field, self.rows, self.cols, tuple(trimmed)))

    def __repr__(self) -> str:
        return f"MatrixSeries({self.rows}x{self.cols} over {self.field!r}, horizon={self.horizon})"

    def __add__(self, other: "MatrixSeries") -> "MatrixSeries":
        if self.field != other.field:
            raise ValueError("mixed fields in matrix series addition")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix series addition")
        horizon = min(self.horizon, other.horizon)
        return MatrixSeries([self.coeffs[t] + other.coeffs[t] for t in range(horizon + 1)])

    def __matmul__(self, other: "MatrixSeries") -> "MatrixSeries":
        """Cauchy product truncated to the shorter horizon."""
        if self.field != other.field:
            raise ValueError("mixed fields in matrix series product")
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} series times {other.rows}x{other.cols}"
            )
        horizon = min(self.horizon, other.horizon)
        out = []
        for t in range(horizon + 1):
            acc = Matrix.zeros(self.field, self.rows, other.cols)
            for i in range(t + 1):
                a, b = self.coeffs[i], other.coeffs[t - i]
                if not a.is_zero and not b.is_zero:
                    acc = acc + (a @ b)
            out.append(acc)
        return MatrixSeries(out)


# ---------------------------------------------------------------------------
# nilpotency, Neumann expansion, Toeplitz stacking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NilpotencyReport:
    nilpotent: bool
    index: Optional[int]


def nilpotency(k0: Matrix) -> NilpotencyReport:
    """Whether the n x n matrix vanishes at some power, and the least one.

    A power of a nilpotent n x n matrix vanishes by exponent n, so the
    scan stops there.
    """
    if not k0.is_square:
        raise ValueError("nilpotency test needs a square matrix")
    n = k0.rows
    power = Matrix.identity(k0.field, n)
    for m in range(1, n + 1):
        power = power @ k0
        if power.is_zero:
            return NilpotencyReport(True, m)
    return NilpotencyReport(False, None)


def neumann_expand(kernel: MatrixSeries, horizon: int) -> MatrixSeries:
    """Coefficients of I + K(z) + K(z)^2 + ... up to z^horizon.

    Requires a nilpotent constant coefficient; otherwise the constant term
    of the sum is already an infinite series over the base field and no
    finite expansion exists.
    """
    if kernel.rows != kernel.cols:
        raise ValueError("Neumann expansion needs a square kernel series")
    k0 = kernel.constant()
    report = nilpotency(k0)
    if not report.nilpotent:
        raise NotExpandableError(
            "constant kernel coefficient is not nilpotent, so the geometric "
            "series of K(z) has no finite coefficient expansion"
        )
    n = kernel.rows
    field = kernel.field
    # B_0 = I + K_0 + ... + K_0^{m-1} = (I - K_0)^{-1}
    b0 = Matrix.identity(field, n)
    power = Matrix.identity(field, n)
    for _ in range(report.index - 1):
        power = power @ k0
        b0 = b0 + power
    out = [b0]
    for t in range(1, horizon + 1):
        acc = Matrix.zeros(field, n, n)
        for tau in range(1, t + 1):
            ktau = kernel.at(tau)
            if not ktau.is_zero:
                acc = acc + (ktau @ out[t - tau])
        out.append(b0 @ acc)
    return MatrixSeries(out)


@dataclass(frozen=True)
class ToeplitzExpansion:
    """Block upper-triangular stacking of coefficient blocks F_0..F_L.

    Block (i, j) holds F_{j-i} for j >= i and zeros below the diagonal, so
    deleting the last block row and block column recovers the stacking of
    order L-1.
    """

    delay: int
    omega: int
    base: tuple
    matrix: Matrix


def block_toeplitz(blocks: Sequence[Matrix], delay: int) -> ToeplitzExpansion:
    if delay < 0:
        raise ValueError("delay must be non-negative")
    if len(blocks) < delay + 1:
        raise ValueError(f"need {delay + 1} coefficient blocks, got {len(blocks)}")
    used = tuple(blocks[: delay + 1])
    first = used[0]
    field = first.field
    zero = Matrix.zeros(field, first.rows, first.cols)
    grid = [
        [(used[j - i] if j >= i else zero) for j in range(delay + 1)]
        for i in range(delay + 1)
    ]
    return ToeplitzExpansion(
        delay=delay, omega=first.rows, base=used, matrix=Matrix.block(grid)
    )
