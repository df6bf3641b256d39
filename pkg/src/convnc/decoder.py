"""Delay-L decodability checks and sequential decoding at a sink.

Everything here operates on the first L+1 coefficient blocks of the
transfer matrix seen by one sink, never on the full series: the verdict
for delay L reads F_0..F_L only.  The decisive test is a rank step on the
block upper-triangular stackings: the code is decodable with delay L
exactly when stacking one more block row raises the rank by the full
source rate.

Decoding matrices are not unique; the builder returns the canonical
solution with all free variables fixed to zero so runs are reproducible,
and correctness is always judged by the defining product relation.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .field import Field, Matrix
from .series import (
    MatrixSeries,
    RationalSeries,
    block_toeplitz,
    poly_divmod,
    poly_gcd,
    poly_mul,
    poly_shift,
    poly_sub,
    poly_trim,
)


class NotDecodableError(ValueError):
    """A decoding matrix was requested at a delay where none exists."""


@dataclass(frozen=True)
class DecodabilityVerdict:
    """Outcome of probing one delay at one sink.

    decodable holds exactly when rank_l - rank_lminus1 equals the source
    rate; necessary_ok is the cheaper full-rank check on the flat block
    row (F_0 ... F_L), which decodability implies but not conversely.
    """

    delay: int
    omega: int
    necessary_ok: bool
    decodable: bool
    rank_l: int
    rank_lminus1: int


def _require_blocks(transfer: MatrixSeries, delay: int) -> None:
    if delay < 0:
        raise ValueError("delay must be non-negative")
    if transfer.horizon < delay:
        raise ValueError(
            f"need coefficient blocks up to z^{delay}, series stops at z^{transfer.horizon}"
        )


def check_necessary(transfer: MatrixSeries, delay: int) -> bool:
    """Full-rank test on (F_0 F_1 ... F_L): necessary for delay-L decoding."""
    _require_blocks(transfer, delay)
    flat = Matrix.hstack([transfer.coeffs[t] for t in range(delay + 1)])
    return flat.rank() == transfer.rows


def check_decodable(transfer: MatrixSeries, delay: int) -> DecodabilityVerdict:
    """Rank-step test for decodability with the given delay.

    The order -1 stacking is empty by convention, so at delay 0 the test
    reduces to full rank of F_0.
    """
    _require_blocks(transfer, delay)
    omega = transfer.rows
    rank_l = block_toeplitz(transfer.coeffs, delay).matrix.rank()
    rank_lminus1 = (
        block_toeplitz(transfer.coeffs, delay - 1).matrix.rank() if delay > 0 else 0
    )
    return DecodabilityVerdict(
        delay=delay,
        omega=omega,
        necessary_ok=check_necessary(transfer, delay),
        decodable=(rank_l - rank_lminus1 == omega),
        rank_l=rank_l,
        rank_lminus1=rank_lminus1,
    )


class _ToeplitzRankTracker:
    """Incremental ranks of the block stackings of growing order.

    Moving to the next order prepends a block of zero columns to every
    stored echelon row and inserts the fresh top block row (F_0 ... F_L);
    only those new rows need eliminating, so a delay scan costs one
    elimination pass per probed delay instead of one per rank.  The basis
    stays sorted by pivot column, which keeps single-pass elimination
    sound: a basis row is zero before its pivot, so later subtractions
    never disturb columns already cleared.
    """

    def __init__(self, transfer: MatrixSeries):
        self.transfer = transfer
        self.field = transfer.field
        self.basis: List[List[int]] = []
        self.pivots: List[int] = []
        self.ranks: List[int] = []  # ranks[l] = rank of the order-l stacking

    def rank_at(self, delay: int) -> int:
        _require_blocks(self.transfer, delay)
        while len(self.ranks) <= delay:
            self._extend()
        return self.ranks[delay]

    def _extend(self) -> None:
        level = len(self.ranks)
        n = self.transfer.cols
        f = self.field
        sub, mul, inv = f.sub, f.mul, f.inv
        for row in self.basis:
            row[:0] = [0] * n
        self.pivots = [p + n for p in self.pivots]
        blocks = [self.transfer.coeffs[t] for t in range(level + 1)]
        for i in range(self.transfer.rows):
            fresh = [x for b in blocks for x in b.data[i]]
            for pivot, row in zip(self.pivots, self.basis):
                factor = fresh[pivot]
                if factor:
                    fresh = [sub(x, mul(factor, y)) for x, y in zip(fresh, row)]
            lead = next((j for j, v in enumerate(fresh) if v), None)
            if lead is not None:
                scale = inv(fresh[lead])
                if scale != 1:
                    fresh = [mul(scale, x) for x in fresh]
                pos = bisect.bisect_left(self.pivots, lead)
                self.pivots.insert(pos, lead)
                self.basis.insert(pos, fresh)
        self.ranks.append(len(self.basis))


def minimal_delay(transfer: MatrixSeries, max_delay: Optional[int] = None) -> Optional[int]:
    """Least delay at which the sink can decode, or None up to the bound.

    Two-phase scan: first advance the cheap necessary test until the flat
    block row reaches full rank, then switch to the rank-step test from
    that point on.  Ranks of the growing stackings are tracked
    incrementally.
    """
    if max_delay is None:
        max_delay = transfer.horizon
    _require_blocks(transfer, max_delay)
    omega = transfer.rows
    start = None
    for delay in range(max_delay + 1):
        if check_necessary(transfer, delay):
            start = delay
            break
    if start is None:
        return None
    tracker = _ToeplitzRankTracker(transfer)
    previous = tracker.rank_at(start - 1) if start > 0 else 0
    for delay in range(start, max_delay + 1):
        current = tracker.rank_at(delay)
        if current - previous == omega:
            return delay
        previous = current
    return None


@dataclass(frozen=True)
class DecodingMatrix:
    """Field-based decoding blocks D_0..D_L for one sink.

    ``stacked`` is the column (D_L; ...; D_0) that extracts the oldest
    pending source vector from a window of L+1 received vectors;
    ``toeplitz`` is the block upper-triangular stacking of the blocks.
    """

    delay: int
    blocks: Tuple[Matrix, ...]

    @property
    def stacked(self) -> Matrix:
        return Matrix.vstack(list(reversed(self.blocks)))

    @property
    def toeplitz(self) -> Matrix:
        return block_toeplitz(self.blocks, self.delay).matrix


def build_decoding_matrix(transfer: MatrixSeries, delay: int) -> DecodingMatrix:
    """Canonical decoding blocks for a sink decodable at the given delay.

    Solves the stacked system F-bar_L (D_L; ...; D_0) = (I; 0), whose
    consistency is equivalent to the rank-step verdict; free variables are
    zero.  The block Toeplitz matrix built from the resulting blocks then
    satisfies F-bar_L D-bar_L = (0 I; 0 0) automatically, because the
    product of two block Toeplitz stackings is the stacking of the
    convolution of their block sequences.
    """
    verdict = check_decodable(transfer, delay)
    if not verdict.decodable:
        raise NotDecodableError(
            f"not decodable with delay {delay}: rank step is "
            f"{verdict.rank_l - verdict.rank_lminus1}, needs {verdict.omega}"
        )
    field = transfer.field
    omega = transfer.rows
    fbar = block_toeplitz(transfer.coeffs, delay).matrix
    target = Matrix.vstack(
        [
            Matrix.identity(field, omega),
            Matrix.zeros(field, omega * delay, omega),
        ]
    ) if delay > 0 else Matrix.identity(field, omega)
    stacked = fbar.solve_right(target)
    if stacked is None:  # unreachable once the verdict holds
        raise NotDecodableError(f"stacked system inconsistent at delay {delay}")
    n = transfer.cols
    blocks = [
        Matrix(field, stacked.data[(delay - j) * n : (delay - j + 1) * n])
        for j in range(delay + 1)
    ]
    return DecodingMatrix(delay=delay, blocks=tuple(blocks))


class SequentialDecoder:
    """Streaming decoder: push received vectors, pop source vectors.

    Pushing y_{k+L} yields x_k.  The buffered window is kept corrected
    with respect to every vector decoded so far: an arriving slot is
    stripped of the gains of all already decoded vectors, and a freshly
    decoded vector's gains are removed from the slots already buffered.
    Every step then reduces to the delay-L extraction applied at slot 0.
    Needs transfer blocks up to the last pushed slot.
    """

    def __init__(self, transfer: MatrixSeries, decoding: DecodingMatrix):
        if transfer.cols != decoding.blocks[0].rows:
            raise ValueError("decoding blocks do not match the sink width")
        self.transfer = transfer
        self.decoding = decoding
        self.delay = decoding.delay
        self.field = transfer.field
        self._window: List[List[int]] = []  # corrected y'_k..y'_t, len <= L+1
        self._slot = -1  # last received slot
        self.decoded: List[Tuple[int, ...]] = []

    def _subtract_gain(self, target: List[int], x: Sequence[int], gain: Matrix) -> None:
        field = self.field
        for j in range(len(target)):
            acc = target[j]
            for i in range(len(x)):
                if x[i] and gain.data[i][j]:
                    acc = field.sub(acc, field.mul(x[i], gain.data[i][j]))
            target[j] = acc

    def push(self, received: Sequence[int]) -> Optional[Tuple[int, ...]]:
        field = self.field
        vec = [field.element(v) for v in received]
        if len(vec) != self.transfer.cols:
            raise ValueError(f"received vector must have {self.transfer.cols} symbols")
        self._slot += 1
        t = self._slot
        if t > self.transfer.horizon:
            raise ValueError(
                f"transfer series stops at z^{self.transfer.horizon}, "
                f"slot {t} needs a longer derivation"
            )
        for j, x_j in enumerate(self.decoded):
            self._subtract_gain(vec, x_j, self.transfer.at(t - j))
        self._window.append(vec)
        if t < self.delay:
            return None
        flat = [v for window_vec in self._window for v in window_vec]
        x_k = (Matrix(field, [flat]) @ self.decoding.stacked).data[0]
        self.decoded.append(x_k)
        self._window.pop(0)
        for offset, buffered in enumerate(self._window, start=1):
            self._subtract_gain(buffered, x_k, self.transfer.at(offset))
        return x_k


def sequential_decode(
    transfer: MatrixSeries,
    decoding: DecodingMatrix,
    received: Sequence[Sequence[int]],
) -> List[Tuple[int, ...]]:
    """Decode a whole received stream; slot k appears once y_{k+L} arrived."""
    decoder = SequentialDecoder(transfer, decoding)
    for vec in received:
        decoder.push(vec)
    return list(decoder.decoded)


# ---------------------------------------------------------------------------
# time-invariant rational decoding matrix
# ---------------------------------------------------------------------------

class _Frac:
    """Fraction of polynomials, reduced, without the constant-term
    normalization: intermediate inverses may carry z factors in the
    denominator that only cancel at the end."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: Field, num, den=(1,)):
        num, den = poly_trim(num), poly_trim(den)
        if not den:
            raise ZeroDivisionError("fraction with zero denominator")
        g = poly_gcd(field, num, den)
        if g and g != (1,):
            num, _ = poly_divmod(field, num, g)
            den, _ = poly_divmod(field, den, g)
        if den and den[-1] != 1:
            scale = field.inv(den[-1])
            num = poly_trim(field.mul(scale, c) for c in num)
            den = poly_trim(field.mul(scale, c) for c in den)
        self.field = field
        self.num = num
        self.den = den

    @property
    def is_zero(self) -> bool:
        return not self.num

    def sub(self, other: "_Frac") -> "_Frac":
        f = self.field
        num = poly_sub(
            f,
            poly_mul(f, self.num, other.den),
            poly_mul(f, other.num, self.den),
        )
        return _Frac(f, num, poly_mul(f, self.den, other.den))

    def mul(self, other: "_Frac") -> "_Frac":
        f = self.field
        return _Frac(f, poly_mul(f, self.num, other.num), poly_mul(f, self.den, other.den))

    def div(self, other: "_Frac") -> "_Frac":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero fraction")
        f = self.field
        return _Frac(f, poly_mul(f, self.num, other.den), poly_mul(f, self.den, other.num))


def time_invariant_decoder(
    transfer: Sequence[Sequence[RationalSeries]], delay: int
) -> Optional[List[List[RationalSeries]]]:
    """Rational matrix D(z) with F(z) D(z) = z^L I, if one exists.

    Takes the exact square rational transfer matrix of a sink whose
    in-degree equals the source rate.  Inverts it over the rational
    function field, scales by z^L, and accepts the result only when every
    entry reduces to a fraction whose denominator has a nonzero constant
    term, i.e. stays a rational power series.  Returns None when the
    matrix is singular or the delay is too small for the z factors to
    cancel.
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    size = len(transfer)
    if size == 0 or any(len(row) != size for row in transfer):
        raise ValueError("time-invariant decoding needs a square rational matrix")
    field = transfer[0][0].field
    work = [
        [_Frac(field, e.num, e.den) for e in row] + [
            _Frac(field, (1,) if i == j else ()) for j in range(size)
        ]
        for i, row in enumerate(transfer)
    ]
    # Gauss-Jordan over the fraction field
    for col in range(size):
        pivot = next((r for r in range(col, size) if not work[r][col].is_zero), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        lead = work[col][col]
        work[col] = [entry.div(lead) for entry in work[col]]
        for r in range(size):
            if r != col and not work[r][col].is_zero:
                factor = work[r][col]
                work[r] = [
                    entry.sub(factor.mul(piv)) for entry, piv in zip(work[r], work[col])
                ]
    shift = _Frac(field, poly_shift((1,), delay))
    out: List[List[RationalSeries]] = []
    for i in range(size):
        row = []
        for j in range(size):
            entry = shift.mul(work[i][size + j])
            if entry.num and entry.den[0] == 0:
                return None
            row.append(RationalSeries(field, entry.num, entry.den))
        out.append(row)
    return out
