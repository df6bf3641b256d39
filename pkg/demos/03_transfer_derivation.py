#!/usr/bin/env python3
"""Deriving the transfer matrix coefficient by coefficient.

The kernels determine the transfer matrix through
F(z) (I - K(z)) = H_s.  Matching coefficients of z^t turns that single
matrix identity into a recursion: F_0 comes from solving against
I - K_0, and every later F_t is a finite combination of earlier
coefficients.  No closed form in z is ever needed, which is the whole
point: entries of F(z) like 1/(1-z) have infinitely many terms, but any
prefix of them is a finite computation.
"""

from convnc import (
    MatrixSeries,
    derive_geks,
    lek_matrix,
    neumann_expand,
    parse_document,
)

UNDELAYED_RING = """
field GF(2)
omega 2
node S
node P
node Q
node R
chan e1 S P
chan e2 S Q
chan e3 P Q
chan e4 Q P
chan e5 Q R
chan e6 R P
lek e1 e3 = 1
lek e2 e5 = 1
lek e3 e4 = 1-z
lek e3 e5 = 1
lek e4 e3 = 1
lek e5 e6 = 1
lek e6 e3 = 1
"""

instance = parse_document(UNDELAYED_RING).instance
horizon = 6
transfer = derive_geks(instance, horizon)

print("transfer coefficients F_0 .. F_6 (rows = messages, cols = channels):")
for t, coeff in enumerate(transfer.coeffs):
    print(f"  t={t}: " + "  ".join("".join(map(str, row)) for row in coeff.data))

print()
print("columns 3, 5, 6 keep repeating: those entries are the expansions of")
print("1/(1-z) and z/(1-z), i.e. this code feeds back forever.")

# the defining equation holds at every truncation order
kernel = lek_matrix(instance, horizon)
i_minus_k = MatrixSeries.identity(instance.field, instance.graph.n, horizon) + MatrixSeries(
    [-c for c in kernel.coeffs]
)
product = transfer @ i_minus_k
assert product.coeffs[0] == instance.hs
assert all(c.is_zero for c in product.coeffs[1:])
print()
print("checked: F(z) (I - K(z)) = H_s through the truncation horizon")

# a feasible code offers a second route: the geometric series of K(z)
FEASIBLE = """
field GF(2)
omega 2
node S
node A
node B
node X
chan e1 S A
chan e2 S B
chan e3 A B
chan e4 B A
chan e5 A X
chan e6 B X
sink X
lek e1 e3 = 1
lek e3 e4 = z
lek e4 e3 = z
lek e2 e4 = 1
lek e1 e5 = 1+z^2
lek e4 e5 = z+z^3
lek e2 e6 = z^2+z^3
lek e3 e6 = z^2+z^4
"""
inst2 = parse_document(FEASIBLE).instance
route_a = derive_geks(inst2, horizon)
expansion = neumann_expand(lek_matrix(inst2, horizon), horizon)
route_b = MatrixSeries([inst2.hs @ c for c in expansion.coeffs])
assert route_a == route_b
print("checked: recursion route == H_s (I + K + K^2 + ...) route on a feasible code")
