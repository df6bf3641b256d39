"""Seeded random code instances for experiments and property suites.

Generation is fully deterministic in the seed; there is no implicit
entropy anywhere.  Graphs may contain cycles, but when ``feasible`` is
set every kernel that points backwards against the channel declaration
order gets a zero constant term, which keeps the constant-term encoding
topology acyclic by construction.
"""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from .field import Field
from .network import Channel, CncInstance, NetworkGraph
from .series import RationalSeries


def _random_poly(rng: random.Random, field: Field, max_degree: int, zero_constant: bool) -> tuple:
    degree = rng.randint(1 if zero_constant else 0, max(max_degree, 1))
    coeffs = [0] * (degree + 1)
    start = 1 if zero_constant else 0
    for i in range(start, degree + 1):
        coeffs[i] = rng.randrange(field.order)
    if all(c == 0 for c in coeffs[start:]):
        coeffs[degree] = rng.randrange(1, field.order)
    return tuple(coeffs)


def _random_kernel(
    rng: random.Random, field: Field, max_degree: int, zero_constant: bool, rational: bool
) -> RationalSeries:
    num = _random_poly(rng, field, max_degree, zero_constant)
    if rational:
        den = (1,) + tuple(rng.randrange(field.order) for _ in range(rng.randint(1, 2)))
        return RationalSeries(field, num, den)
    return RationalSeries(field, num)


def random_instance(
    seed: int,
    field: Field,
    omega: int = 2,
    relays: int = 3,
    extra_channels: int = 5,
    sinks: int = 1,
    cycle_density: float = 0.3,
    rational_density: float = 0.15,
    lek_density: float = 0.9,
    max_degree: int = 2,
    feasible: bool = True,
) -> CncInstance:
    """Build a random single-source instance.

    The first omega channels leave the source, so the default injection
    matrix is physically meaningful.  Every relay and sink is guaranteed
    an incoming channel, sinks receive at least omega of them, and with
    ``feasible`` the constant-term topology is acyclic by construction.
    """
    if relays < 1 or omega < 1 or sinks < 1:
        raise ValueError("need at least one relay, one sink, and rate one")
    rng = random.Random(seed)
    relay_names = [f"R{i + 1}" for i in range(relays)]
    sink_names = [f"T{i + 1}" for i in range(sinks)]
    nodes = ["S"] + relay_names + sink_names
    channels: List[Channel] = []

    def add_channel(tail: str, head: str) -> None:
        channels.append(Channel(f"e{len(channels) + 1}", tail, head))

    for i in range(omega):
        add_channel("S", relay_names[i % relays])
    # every relay reachable: chain the ones not already fed by the source
    fed = {ch.head for ch in channels}
    for i, name in enumerate(relay_names):
        if name not in fed:
            add_channel("S" if i == 0 else relay_names[i - 1], name)
            fed.add(name)
    for _ in range(extra_channels):
        if rng.random() < cycle_density and relays >= 2:
            a, b = rng.sample(range(relays), 2)
            if a < b:
                a, b = b, a  # point backwards to invite graph cycles
            add_channel(relay_names[a], relay_names[b])
        else:
            tail = rng.choice(["S"] + relay_names)
            heads = [n for n in relay_names + sink_names if n != tail]
            add_channel(tail, rng.choice(heads))
    for sink in sink_names:
        have = sum(1 for ch in channels if ch.head == sink)
        pool = list(relay_names)
        while have < omega:
            add_channel(pool[have % len(pool)], sink)
            have += 1

    graph = NetworkGraph(nodes, channels, "S", omega, sink_names)
    leks: Dict[Tuple[str, str], RationalSeries] = {}
    for e_idx, e in enumerate(graph.channels):
        for d_idx in graph.in_channels(e.tail):
            if rng.random() > lek_density:
                continue
            backwards = d_idx >= e_idx
            zero_constant = feasible and backwards
            rational = rng.random() < rational_density
            d = graph.channels[d_idx].id
            leks[(d, e.id)] = _random_kernel(rng, field, max_degree, zero_constant, rational)
    return CncInstance(field, graph, leks)


def random_source_stream(
    seed: int, field: Field, omega: int, slots: int
) -> Tuple[Tuple[int, ...], ...]:
    rng = random.Random(seed)
    return tuple(
        tuple(rng.randrange(field.order) for _ in range(omega)) for _ in range(slots)
    )
