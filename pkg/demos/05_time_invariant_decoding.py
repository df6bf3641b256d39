#!/usr/bin/env python3
"""The time-invariant alternative: one rational matrix instead of blocks.

When the sink's transfer matrix is square and known exactly in rational
form, a single matrix D(z) with F(z) D(z) = z^L I decodes forever with
fixed taps (shift registers, in hardware terms).  The field-based block
route from the other demos needs only the first coefficients but is time
varying; this route is the converse trade.  Success here implies the
block route succeeds at the same delay; the reverse direction is not
guaranteed, which is why the block route is the decisive test.
"""

from convnc import (
    GF,
    MatrixSeries,
    check_decodable,
    parse_rational,
    time_invariant_decoder,
)

gf2 = GF(2)


def grid(rows):
    return [[parse_rational(cell, gf2) for cell in row] for row in rows]


transfer = grid([["1", "z^2"], ["z", "z^2"]])

for delay in (0, 1, 2):
    result = time_invariant_decoder(transfer, delay)
    print(f"delay {delay}: {'no rational inverse' if result is None else 'found D(z)'}")

decoder = time_invariant_decoder(transfer, 2)
print()
print("D(z) for delay 2:")
from convnc import render_rational

for row in decoder:
    print("  [" + ", ".join(render_rational(e) for e in row) + "]")

product = MatrixSeries.from_rational(transfer, 10) @ MatrixSeries.from_rational(decoder, 10)
shifted_identity = MatrixSeries.from_rational(grid([["z^2", "0"], ["0", "z^2"]]), 10)
assert product == shifted_identity
print("checked: F(z) D(z) = z^2 I through ten coefficient terms")

expanded = MatrixSeries.from_rational(transfer, 6)
assert check_decodable(expanded, 2).decodable
print("checked: the field-based rank test agrees at the same delay")

singular = grid([["1+z", "1+z^2"], ["1", "1+z"]])
print()
print("a singular transfer matrix has no rational inverse at any delay:")
for delay in range(4):
    assert time_invariant_decoder(singular, delay) is None
print("  delays 0..3 all refused, as they must be")
