#!/usr/bin/env python3
"""Tour of the computational substrate: exact fields, fractions in z.

Everything downstream (feasibility checks, transfer derivation, decoding)
is built from two ingredients shown here: finite field arithmetic on
plain ints, and rational power series kept as reduced fractions that are
expanded into coefficients only when needed.
"""

from convnc import GF, Matrix, RationalSeries, parse_rational

gf2 = GF(2)
gf16 = GF(16)

print("== field arithmetic is exact ==")
print(f"GF(2): 1 + 1 = {gf2.add(1, 1)}")
print(f"GF(16): 7 * 9 = {gf16.mul(7, 9)}, inverse of 7 is {gf16.inv(7)}")
print(f"check: 7 * {gf16.inv(7)} = {gf16.mul(7, gf16.inv(7))}")

print()
print("== rational power series ==")
k = parse_rational("z/(1-z)", gf2)
print(f"z/(1-z) over GF(2) is stored reduced: num={k.num} den={k.den}")
print(f"its first coefficients: {k.expand(7)}")

geo = parse_rational("1/(1-z)", gf2)
print(f"1/(1-z) + z/(1-z) = {'1' if geo + k == RationalSeries.one(gf2) else '?'}")

print()
print("== linear algebra over the field ==")
m = Matrix(gf2, [[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]])
print(f"a 3x4 matrix over GF(2) has rank {m.rank()}")
rhs = Matrix(gf2, [[1], [0], [1]])
x = m.solve_right(rhs)
print(f"canonical solution of M x = b (free variables zero): {[row[0] for row in x.data]}")
print(f"re-multiplied: {[row[0] for row in (m @ x).data]} == {[row[0] for row in rhs.data]}")
