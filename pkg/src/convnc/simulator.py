"""Per-slot symbol propagation through a feasible code.

Within each time slot the channels are processed in the fixed topological
order of the constant-term encoding topology.  A channel's symbol at slot
t combines the source injection for slot t with kernel taps over its
upstream channels' histories; the zero-delay tap only ever references
channels already computed in the same slot, which is exactly what the
acyclicity precondition guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .network import CncInstance, acyclicity, encoding_topology


class NotFeasibleError(ValueError):
    """Per-slot encoding is impossible: the constant-term topology is cyclic."""


@dataclass(frozen=True)
class SymbolStream:
    """Symbols carried by every channel at slots 0..T plus the source input."""

    channel_ids: Tuple[str, ...]
    values: Dict[str, Tuple[int, ...]]
    source: Tuple[Tuple[int, ...], ...]

    @property
    def slots(self) -> int:
        return len(self.source)

    def channel(self, channel_id: str) -> Tuple[int, ...]:
        return self.values[channel_id]


def simulate(
    instance: CncInstance, source: Sequence[Sequence[int]], horizon: Optional[int] = None
) -> SymbolStream:
    """Run the code on a source symbol stream for slots 0..horizon.

    The source stream is zero padded up to the horizon; supplying more
    slots than the horizon is an error rather than silent truncation.
    """
    g = instance.graph
    field = instance.field
    topo = acyclicity(encoding_topology(instance, "k0"))
    if not topo.acyclic:
        raise NotFeasibleError(
            "encoding topology of the constant kernel terms contains the "
            f"cycle {' -> '.join(topo.cycle)}: no per-slot encoding order exists"
        )
    if horizon is None:
        if not source:
            raise ValueError("need a horizon or a nonempty source stream")
        horizon = len(source) - 1
    if len(source) > horizon + 1:
        raise ValueError(f"source stream has {len(source)} slots, horizon is {horizon}")
    xs: List[Tuple[int, ...]] = []
    for t in range(horizon + 1):
        if t < len(source):
            row = tuple(field.element(v) for v in source[t])
            if len(row) != g.omega:
                raise ValueError(f"source vector at slot {t} must have {g.omega} symbols")
        else:
            row = (0,) * g.omega
        xs.append(row)

    # kernel taps expanded once; taps[(d, e)][tau] scales y_{d, t - tau}
    taps = {pair: k.expand(horizon) for pair, k in instance.leks.items() if not k.is_zero}
    feeds: Dict[str, List] = {ch.id: [] for ch in g.channels}
    for (d, e), coeffs in taps.items():
        feeds[e].append((d, coeffs))

    add, mul = field.add, field.mul
    hs = instance.hs
    history: Dict[str, List[int]] = {ch.id: [] for ch in g.channels}
    for t in range(horizon + 1):
        x_t = xs[t]
        for e in topo.order:
            col = g.index(e)
            acc = 0
            for i in range(g.omega):
                gain = hs.data[i][col]
                if gain and x_t[i]:
                    acc = add(acc, mul(gain, x_t[i]))
            for d, coeffs in feeds[e]:
                upstream = history[d]
                for tau in range(min(t, len(coeffs) - 1) + 1):
                    c = coeffs[tau]
                    if c:
                        acc = add(acc, mul(c, upstream[t - tau]))
            history[e].append(acc)

    return SymbolStream(
        channel_ids=tuple(ch.id for ch in g.channels),
        values={cid: tuple(vals) for cid, vals in history.items()},
        source=tuple(xs),
    )


def received_at(
    stream: SymbolStream, instance: CncInstance, sink: str
) -> List[Tuple[int, ...]]:
    """Per-slot vectors over the channels entering a sink, in index order."""
    if sink not in instance.graph.sinks:
        raise ValueError(f"{sink!r} is not a declared sink")
    incoming = instance.graph.in_channels(sink)
    ids = [instance.graph.channels[i].id for i in incoming]
    return [
        tuple(stream.values[cid][t] for cid in ids) for t in range(stream.slots)
    ]
