"""Exact 1-Wasserstein distance on a graph metric.

Measures are scaled by the lcm of their denominators so the transportation
problem has integer supplies, then solved by successive shortest paths with
Dijkstra on reduced costs. Mass shared by both measures stays in place.
"""

from __future__ import annotations

import heapq
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from ricci_gluing.errors import (
    InfeasiblePlanError,
    InvalidInputError,
    NotLipschitzError,
    SupportOutOfRangeError,
)
from ricci_gluing.graph import Graph, VertexMeasure
from ricci_gluing.metrics import TRANSPORT_SOLVE_SECONDS, TRANSPORT_SOLVES

logger = logging.getLogger(__name__)

INFINITY = 10**18


@dataclass(frozen=True)
class TransportPlan:
    """Coupling entries (source, target, mass) and their total cost."""

    entries: tuple[tuple[int, int, Fraction], ...]
    cost: Fraction

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return {(u, v): mass for u, v, mass in self.entries}

    def marginals(self) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
        rows: dict[int, Fraction] = defaultdict(Fraction)
        cols: dict[int, Fraction] = defaultdict(Fraction)
        for u, v, mass in self.entries:
            rows[u] += mass
            cols[v] += mass
        return dict(rows), dict(cols)


@dataclass(frozen=True)
class LipschitzWitness:
    """Integer potential f with its dual value sum_u f(u) (mu(u) - nu(u)).

    Vertices missing from ``values`` carry potential 0.
    """

    values: dict[int, int]
    attained_value: Fraction

    @classmethod
    def from_potential(
        cls, values: Mapping[int, int], mu: VertexMeasure, nu: VertexMeasure
    ) -> "LipschitzWitness":
        potential = {int(vertex): int(value) for vertex, value in values.items()}
        return cls(values=potential, attained_value=dual_value(potential, mu, nu))


@dataclass(frozen=True)
class DualCertificate:
    attained_value: Fraction
    primal_value: Fraction

    @property
    def gap(self) -> Fraction:
        return self.primal_value - self.attained_value

    @property
    def within_bound(self) -> bool:
        return self.attained_value <= self.primal_value

    @property
    def certifies_optimality(self) -> bool:
        return self.attained_value == self.primal_value


def dual_value(values: Mapping[int, int], mu: VertexMeasure, nu: VertexMeasure) -> Fraction:
    total = Fraction(0)
    for vertex, mass in mu.support:
        total += values.get(vertex, 0) * mass
    for vertex, mass in nu.support:
        total -= values.get(vertex, 0) * mass
    return total


def check_support(g: Graph, measure: VertexMeasure) -> None:
    for vertex in measure.vertices:
        if not 0 <= vertex < g.vertex_count:
            raise SupportOutOfRangeError(
                f"measure charges vertex {vertex} outside 0..{g.vertex_count - 1}"
            )


class _ResidualNetwork:
    """Arc-pair residual network; arc ``i ^ 1`` is the reverse of arc ``i``."""

    def __init__(self, node_count: int) -> None:
        self.node_count = node_count
        self.heads: list[int] = []
        self.residual: list[int] = []
        self.costs: list[int] = []
        self.outgoing: list[list[int]] = [[] for _ in range(node_count)]

    def add_arc(self, tail: int, head: int, capacity: int, cost: int) -> int:
        index = len(self.heads)
        self.heads.extend((head, tail))
        self.residual.extend((capacity, 0))
        self.costs.extend((cost, -cost))
        self.outgoing[tail].append(index)
        self.outgoing[head].append(index + 1)
        return index

    def flow(self, arc: int) -> int:
        return self.residual[arc ^ 1]

    def _shortest_paths(self, source: int, potential: list[int]) -> tuple[list[int], list[int]]:
        dist = [INFINITY] * self.node_count
        parent = [-1] * self.node_count
        done = [False] * self.node_count
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            best, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            offset = best + potential[u]
            for arc in self.outgoing[u]:
                if self.residual[arc] <= 0:
                    continue
                v = self.heads[arc]
                if done[v]:
                    continue
                candidate = offset + self.costs[arc] - potential[v]
                if candidate < dist[v]:
                    dist[v] = candidate
                    parent[v] = arc
                    heapq.heappush(heap, (candidate, v))
        return dist, parent

    def min_cost_flow(self, source: int, sink: int, demand: int) -> int:
        """Push ``demand`` units from source to sink; return the total cost."""
        potential = [0] * self.node_count
        flow = 0
        total_cost = 0
        while flow < demand:
            dist, parent = self._shortest_paths(source, potential)
            bound = dist[sink]
            if bound >= INFINITY:
                raise InfeasiblePlanError(f"only {flow} of {demand} units could be routed")
            for v in range(self.node_count):
                potential[v] += min(dist[v], bound)

            push = demand - flow
            v = sink
            while v != source:
                arc = parent[v]
                push = min(push, self.residual[arc])
                v = self.heads[arc ^ 1]
            v = sink
            while v != source:
                arc = parent[v]
                self.residual[arc] -= push
                self.residual[arc ^ 1] += push
                total_cost += push * self.costs[arc]
                v = self.heads[arc ^ 1]
            flow += push
        return total_cost


def _identity_plan(mu: VertexMeasure) -> TransportPlan:
    return TransportPlan(tuple((v, v, mass) for v, mass in mu.support), Fraction(0))


def wasserstein(
    g: Graph, mu: VertexMeasure, nu: VertexMeasure, *, scale_multiple: int = 1
) -> tuple[Fraction, TransportPlan]:
    """Return W1(mu, nu) on the hop metric of g and an optimal coupling.

    ``scale_multiple`` multiplies the common denominator used for the integer
    problem; the returned value does not depend on it.
    """
    check_support(g, mu)
    check_support(g, nu)
    if scale_multiple < 1:
        raise InvalidInputError(f"scale_multiple must be positive, got {scale_multiple}")
    if mu == nu:
        TRANSPORT_SOLVES.labels("identity").inc()
        return Fraction(0), _identity_plan(mu)

    with TRANSPORT_SOLVE_SECONDS.time():
        scale = math.lcm(*(mass.denominator for _, mass in mu.support + nu.support))
        scale *= scale_multiple
        supply = {v: int(mass * scale) for v, mass in mu.support}
        demand = {v: int(mass * scale) for v, mass in nu.support}
        stay = {v: min(amount, demand[v]) for v, amount in supply.items() if v in demand}

        sources = [(v, amount - stay.get(v, 0)) for v, amount in supply.items() if amount > stay.get(v, 0)]
        sinks = [(v, amount - stay.get(v, 0)) for v, amount in demand.items() if amount > stay.get(v, 0)]
        total = sum(amount for _, amount in sources)

        network = _ResidualNetwork(len(sources) + len(sinks) + 2)
        super_source = 0
        super_sink = network.node_count - 1
        first_sink = 1 + len(sources)
        for i, (_, amount) in enumerate(sources):
            network.add_arc(super_source, 1 + i, amount, 0)
        for j, (_, amount) in enumerate(sinks):
            network.add_arc(first_sink + j, super_sink, amount, 0)
        transport_arcs: list[tuple[int, int, int]] = []
        for i, (u, _) in enumerate(sources):
            for j, (v, _) in enumerate(sinks):
                arc = network.add_arc(1 + i, first_sink + j, total, int(g.distance_matrix[u, v]))
                transport_arcs.append((u, v, arc))

        integer_cost = network.min_cost_flow(super_source, super_sink, total)

        moved: dict[tuple[int, int], int] = {(v, v): amount for v, amount in stay.items() if amount}
        for u, v, arc in transport_arcs:
            amount = network.flow(arc)
            if amount:
                moved[(u, v)] = amount
        cost = Fraction(integer_cost, scale)
        plan = TransportPlan(
            tuple((u, v, Fraction(amount, scale)) for (u, v), amount in sorted(moved.items())),
            cost,
        )

    TRANSPORT_SOLVES.labels("min_cost_flow").inc()
    logger.debug(
        "solved transport: %d sources, %d sinks, scale %d, W=%s", len(sources), len(sinks), scale, cost
    )
    return cost, plan


def validate_plan(
    g: Graph,
    mu: VertexMeasure,
    nu: VertexMeasure,
    entries: Mapping[tuple[int, int], Fraction] | Iterable[tuple[int, int, Fraction]],
) -> TransportPlan:
    """Check that entries form a coupling of mu and nu and return it with its cost."""
    if isinstance(entries, Mapping):
        items = [(u, v, mass) for (u, v), mass in entries.items()]
    else:
        items = list(entries)

    combined: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for u, v, mass in items:
        g.check_vertex(u)
        g.check_vertex(v)
        mass = Fraction(mass)
        if mass < 0:
            raise InfeasiblePlanError(f"negative mass {mass} on ({u}, {v})")
        if mass:
            combined[(u, v)] += mass

    plan = TransportPlan(
        tuple((u, v, mass) for (u, v), mass in sorted(combined.items())),
        sum((mass * int(g.distance_matrix[u, v]) for (u, v), mass in combined.items()), Fraction(0)),
    )
    rows, cols = plan.marginals()
    for vertex in sorted(set(rows) | set(mu.vertices)):
        if rows.get(vertex, Fraction(0)) != mu.mass(vertex):
            raise InfeasiblePlanError(
                f"row sum at vertex {vertex} is {rows.get(vertex, 0)}, expected {mu.mass(vertex)}"
            )
    for vertex in sorted(set(cols) | set(nu.vertices)):
        if cols.get(vertex, Fraction(0)) != nu.mass(vertex):
            raise InfeasiblePlanError(
                f"column sum at vertex {vertex} is {cols.get(vertex, 0)}, expected {nu.mass(vertex)}"
            )
    return plan


def check_dual_witness(
    g: Graph,
    mu: VertexMeasure,
    nu: VertexMeasure,
    f: LipschitzWitness | Mapping[int, int],
    w: Fraction,
) -> DualCertificate:
    """Verify f is 1-Lipschitz on g and compare its dual value against w.

    Raises NotLipschitzError naming the first violating pair.
    """
    if not isinstance(f, LipschitzWitness):
        f = LipschitzWitness.from_potential(f, mu, nu)
    attained = dual_value(f.values, mu, nu)
    if f.attained_value != attained:
        raise InvalidInputError(
            f"witness records attained value {f.attained_value}, but mu and nu give {attained}"
        )

    potential = np.zeros(g.vertex_count, dtype=np.int64)
    for vertex, value in f.values.items():
        g.check_vertex(vertex)
        potential[vertex] = value
    spread = np.abs(potential[:, None] - potential[None, :])
    violations = np.argwhere(spread > g.distance_matrix)
    if violations.size:
        u, v = (int(index) for index in violations[0])
        raise NotLipschitzError(u, v, int(spread[u, v]), int(g.distance_matrix[u, v]))

    return DualCertificate(attained_value=attained, primal_value=Fraction(w))
