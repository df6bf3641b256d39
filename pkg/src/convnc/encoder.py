"""Feasibility classification and coefficient-wise transfer derivation.

The classification chain runs on the constant kernel coefficients alone:
an acyclic encoding topology of the constant terms makes the code
realizable slot by slot, forces those constants to be nilpotent, and in
turn guarantees a unique transfer matrix.  Uniqueness alone only needs
I - K_0 to be invertible, which also holds for some cyclic topologies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .field import Matrix
from .network import CncInstance, acyclicity, encoding_topology, k0_matrix, lek_matrix
from .series import MatrixSeries, nilpotency


class NotNormalError(ValueError):
    """The kernels admit no unique transfer matrix (I - K_0 is singular)."""


@dataclass(frozen=True)
class FeasibilityReport:
    """Condition chain for a kernel assignment.

    practically_feasible and et_k0_acyclic are the same condition; normal
    and i_minus_k0_invertible likewise.  k0_nilpotent sits strictly
    between them: acyclic topology implies nilpotent implies invertible,
    and neither implication reverses.
    """

    et_k0_acyclic: bool
    k0_nilpotent: bool
    k0_nilpotency_index: Optional[int]
    i_minus_k0_invertible: bool
    normal: bool
    practically_feasible: bool


def classify(instance: CncInstance) -> FeasibilityReport:
    k0 = k0_matrix(instance)
    topo = acyclicity(encoding_topology(instance, "k0"))
    nil = nilpotency(k0)
    n = instance.graph.n
    eye = Matrix.identity(instance.field, n)
    invertible = (eye - k0).rank() == n
    return FeasibilityReport(
        et_k0_acyclic=topo.acyclic,
        k0_nilpotent=nil.nilpotent,
        k0_nilpotency_index=nil.index,
        i_minus_k0_invertible=invertible,
        normal=invertible,
        practically_feasible=topo.acyclic,
    )


def derive_geks(instance: CncInstance, horizon: int) -> MatrixSeries:
    """Transfer coefficients F_0..F_T from the kernel coefficients.

    F_0 solves F_0 (I - K_0) = H_s and each later coefficient follows from
    F_t = (sum_{tau < t} F_tau K_{t - tau}) (I - K_0)^{-1}, so the result
    satisfies F(z) (I - K(z)) = H_s truncated at the horizon.  The inverse
    is computed once; the recursion is quadratic in the horizon.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    n = instance.graph.n
    field = instance.field
    kernel = lek_matrix(instance, horizon)
    eye = Matrix.identity(field, n)
    inv = (eye - kernel.constant()).inverse()
    if inv is None:
        raise NotNormalError(
            "I - K_0 is singular: the kernels do not determine a unique "
            "transfer matrix, so there is nothing canonical to derive"
        )
    coeffs = [instance.hs @ inv]
    for t in range(1, horizon + 1):
        acc = Matrix.zeros(field, instance.graph.omega, n)
        for tau in range(t):
            ktt = kernel.coeffs[t - tau]
            if not ktt.is_zero:
                acc = acc + (coeffs[tau] @ ktt)
        coeffs.append(acc @ inv)
    return MatrixSeries(coeffs)


def gek_at_sink(transfer: MatrixSeries, instance: CncInstance, sink: str) -> MatrixSeries:
    """Columns of the transfer series for the channels entering a sink."""
    if sink not in instance.graph.sinks:
        raise ValueError(f"{sink!r} is not a declared sink")
    incoming = instance.graph.in_channels(sink)
    if not incoming:
        raise ValueError(f"sink {sink!r} has no incoming channels")
    return MatrixSeries([m.select_columns(incoming) for m in transfer.coeffs])
