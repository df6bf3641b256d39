#!/usr/bin/env python3
"""Three codes on cyclic networks, three different classifications.

A code runs slot by slot exactly when the coding digraph of the constant
kernel terms (arc d -> e when the zero-delay tap from d onto e is live)
is acyclic.  That acyclicity forces the constant matrix K_0 to be
nilpotent, and nilpotency in turn makes I - K_0 invertible, which is all
it takes for the kernels to pin down a unique transfer matrix F(z).
Neither implication reverses, and the second and third codes below are
the standard witnesses.
"""

from convnc import classify, parse_document

RING_WITH_DELAYS = """
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

CANCELLING_CYCLES = """
field GF(2)
omega 2
node S
node U
node W
node V
chan e1 S U
chan e2 U W
chan e3 V U
chan e4 W V
chan e5 V U
chan e6 S V
sink U
sink V
lek e1 e2 = 1
lek e2 e4 = 1
lek e3 e2 = 1
lek e4 e3 = 1
lek e4 e5 = 1
lek e5 e2 = 1
lek e6 e3 = 1
lek e6 e5 = 1
inject 1 e1 = 1
inject 2 e6 = 1
"""

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


def show(title, text):
    report = classify(parse_document(text).instance)
    print(f"== {title} ==")
    print(f"  constant-term topology acyclic : {report.et_k0_acyclic}")
    print(f"  K_0 nilpotent                  : {report.k0_nilpotent}"
          + (f" (index {report.k0_nilpotency_index})" if report.k0_nilpotent else ""))
    print(f"  I - K_0 invertible             : {report.i_minus_k0_invertible}")
    print(f"  unique transfer matrix         : {report.normal}")
    print(f"  runs slot by slot              : {report.practically_feasible}")
    print()


show("delays on every ring tap: fully feasible", RING_WITH_DELAYS)
show("two overlapping undelayed rings that cancel: nilpotent, not feasible",
     CANCELLING_CYCLES)
show("one undelayed ring that never cancels: not even nilpotent, still normal",
     UNDELAYED_RING)
