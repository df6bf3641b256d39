"""Directed network model, kernel assignment, and encoding topology.

Channels are declared in a fixed order and that declaration order is the
global channel index used by every matrix in the package, including the
source injection matrix.  Cycles and parallel channels are allowed;
self loops are rejected because a channel from a node to itself carries
no information anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .field import Field, Matrix
from .series import MatrixSeries, RationalSeries


@dataclass(frozen=True)
class Channel:
    id: str
    tail: str
    head: str


class NetworkGraph:
    """Finite directed multigraph with one source of rate omega and sinks."""

    __slots__ = ("nodes", "channels", "source", "omega", "sinks", "_index")

    def __init__(
        self,
        nodes: Sequence[str],
        channels: Sequence[Channel],
        source: str,
        omega: int,
        sinks: Sequence[str] = (),
    ):
        nodes = tuple(nodes)
        channels = tuple(channels)
        sinks = tuple(sinks)
        known = set(nodes)
        if len(known) != len(nodes):
            raise ValueError("duplicate node ids")
        if source not in known:
            raise ValueError(f"unknown source node {source!r}")
        seen = set()
        for ch in channels:
            if ch.id in seen:
                raise ValueError(f"duplicate channel id {ch.id!r}")
            seen.add(ch.id)
            if ch.tail not in known or ch.head not in known:
                raise ValueError(f"channel {ch.id!r} references an undeclared node")
            if ch.tail == ch.head:
                raise ValueError(f"channel {ch.id!r} is a self loop")
        for s in sinks:
            if s not in known:
                raise ValueError(f"unknown sink node {s!r}")
        if omega < 1:
            raise ValueError("source rate omega must be at least 1")
        if not any(ch.tail == source for ch in channels):
            raise ValueError("source has no outgoing channel")
        # the source's only inputs are its imaginary message channels
        if any(ch.head == source for ch in channels):
            raise ValueError("the source cannot have incoming channels")
        self.nodes = nodes
        self.channels = channels
        self.source = source
        self.omega = omega
        self.sinks = sinks
        self._index = {ch.id: i for i, ch in enumerate(channels)}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, NetworkGraph)
            and self.nodes == other.nodes
            and self.channels == other.channels
            and self.source == other.source
            and self.omega == other.omega
            and self.sinks == other.sinks
        )

    def __hash__(self) -> int:
        return hash((self.nodes, self.channels, self.source, self.omega, self.sinks))

    @property
    def n(self) -> int:
        return len(self.channels)

    def index(self, channel_id: str) -> int:
        try:
            return self._index[channel_id]
        except KeyError:
            raise ValueError(f"unknown channel {channel_id!r}") from None

    def in_channels(self, node: str) -> Tuple[int, ...]:
        """Indices of channels entering a node, in declaration order."""
        if node not in self.nodes:
            raise ValueError(f"unknown node {node!r}")
        return tuple(i for i, ch in enumerate(self.channels) if ch.head == node)

    def out_channels(self, node: str) -> Tuple[int, ...]:
        if node not in self.nodes:
            raise ValueError(f"unknown node {node!r}")
        return tuple(i for i, ch in enumerate(self.channels) if ch.tail == node)

    def is_adjacent_pair(self, d: str, e: str) -> bool:
        """True when some node has d incoming and e outgoing."""
        cd = self.channels[self.index(d)]
        ce = self.channels[self.index(e)]
        return cd.head == ce.tail


def default_injection(field: Field, omega: int, n: int) -> Matrix:
    """The rate-omega injection matrix [I 0] under the channel ordering."""
    if n < omega:
        raise ValueError("fewer channels than source rate")
    return Matrix(
        field,
        [[1 if i == j else 0 for j in range(n)] for i in range(omega)],
    )


class CncInstance:
    """A network plus a kernel assignment and a source injection matrix.

    ``leks`` maps adjacent channel pairs (d, e) to the rational kernel the
    node between them applies from d onto e.  Pairs that are absent encode
    the zero kernel.
    """

    __slots__ = ("field", "graph", "leks", "hs")

    def __init__(
        self,
        field: Field,
        graph: NetworkGraph,
        leks: Mapping[Tuple[str, str], RationalSeries],
        hs: Optional[Matrix] = None,
    ):
        for (d, e), k in leks.items():
            if k.field != field:
                raise ValueError(f"kernel for ({d!r}, {e!r}) uses a different field")
            if not graph.is_adjacent_pair(d, e):
                raise ValueError(f"({d!r}, {e!r}) is not an adjacent pair")
        if hs is None:
            hs = default_injection(field, graph.omega, graph.n)
        if hs.field != field:
            raise ValueError("injection matrix uses a different field")
        if (hs.rows, hs.cols) != (graph.omega, graph.n):
            raise ValueError(
                f"injection matrix must be {graph.omega}x{graph.n}, got {hs.rows}x{hs.cols}"
            )
        if hs.rank() != graph.omega:
            raise ValueError("injection matrix must have full rank omega")
        self.field = field
        self.graph = graph
        self.leks = dict(leks)
        self.hs = hs

    def lek(self, d: str, e: str) -> RationalSeries:
        return self.leks.get((d, e), RationalSeries.zero(self.field))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CncInstance)
            and self.field == other.field
            and self.graph == other.graph
            and {k: v for k, v in self.leks.items() if not v.is_zero}
            == {k: v for k, v in other.leks.items() if not v.is_zero}
            and self.hs == other.hs
        )


def lek_matrix(instance: CncInstance, horizon: int) -> MatrixSeries:
    """The n x n kernel matrix as a truncated series, K[d][e] = k_{d,e}."""
    g = instance.graph
    n = g.n
    grids = [
        [[0] * n for _ in range(n)] for _ in range(horizon + 1)
    ]
    for (d, e), k in instance.leks.items():
        di, ei = g.index(d), g.index(e)
        for t, c in enumerate(k.expand(horizon)):
            grids[t][di][ei] = c
    return MatrixSeries([Matrix(instance.field, grid) for grid in grids])


def k0_matrix(instance: CncInstance) -> Matrix:
    """Constant coefficients of the kernel matrix."""
    g = instance.graph
    n = g.n
    grid = [[0] * n for _ in range(n)]
    for (d, e), k in instance.leks.items():
        grid[g.index(d)][g.index(e)] = k.constant_coefficient()
    return Matrix(instance.field, grid)


@dataclass(frozen=True)
class EncodingTopology:
    """Digraph on the channel set describing which coding steps feed which.

    mode "k0" keeps an arc d -> e when the kernel's constant term is
    nonzero; mode "kz" keeps it whenever the kernel is nonzero at all.
    """

    mode: str
    vertices: Tuple[str, ...]
    arcs: Tuple[Tuple[str, str], ...]


def encoding_topology(instance: CncInstance, mode: str = "k0") -> EncodingTopology:
    if mode not in ("k0", "kz"):
        raise ValueError(f"mode must be 'k0' or 'kz', got {mode!r}")
    g = instance.graph
    arcs = []
    for (d, e), k in instance.leks.items():
        keep = (k.constant_coefficient() != 0) if mode == "k0" else (not k.is_zero)
        if keep:
            arcs.append((d, e))
    arcs.sort(key=lambda pair: (g.index(pair[0]), g.index(pair[1])))
    return EncodingTopology(
        mode=mode,
        vertices=tuple(ch.id for ch in g.channels),
        arcs=tuple(arcs),
    )


@dataclass(frozen=True)
class AcyclicityReport:
    acyclic: bool
    order: Optional[Tuple[str, ...]]
    cycle: Optional[Tuple[str, ...]]


def acyclicity(topology: EncodingTopology) -> AcyclicityReport:
    """Topological order of the channel digraph, or a witness cycle.

    The order is the time-invariant encoding order: within one time slot,
    a channel's symbol may depend with zero delay only on channels that
    appear earlier.  Ties are broken by declaration order so the result is
    deterministic.
    """
    verts = topology.vertices
    position = {v: i for i, v in enumerate(verts)}
    succ: Dict[str, list] = {v: [] for v in verts}
    indegree = {v: 0 for v in verts}
    for d, e in topology.arcs:
        succ[d].append(e)
        indegree[e] += 1
    ready = sorted((v for v in verts if indegree[v] == 0), key=position.__getitem__)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        inserted = False
        for w in succ[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                ready.append(w)
                inserted = True
        if inserted:
            ready.sort(key=position.__getitem__)
    if len(order) == len(verts):
        return AcyclicityReport(True, tuple(order), None)
    # every remaining vertex has an incoming arc from another remaining
    # vertex, so walking predecessors must revisit one: that loop is the
    # witness
    remaining = [v for v in verts if indegree[v] > 0]
    remaining_set = set(remaining)
    pred: Dict[str, str] = {}
    for d, e in topology.arcs:
        if d in remaining_set and e in remaining_set and e not in pred:
            pred[e] = d
    walk = [remaining[0]]
    seen = {remaining[0]}
    while True:
        prev = pred[walk[-1]]
        if prev in seen:
            start = walk.index(prev)
            cycle = tuple(reversed(walk[start:]))
            return AcyclicityReport(False, None, cycle)
        walk.append(prev)
        seen.add(prev)
