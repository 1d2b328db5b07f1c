"""Hand-built couplings and Lipschitz potentials for edges of the gluing graph.

Each fixture is parameterised by (n, m) and states when it applies. A
coupling certifies an upper bound on W through its cost, a potential a lower
bound through its dual value; where both meet the solver value the closed
form is certified independently of the flow solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from ricci_gluing.errors import ClassEmptyForSpecError
from ricci_gluing.gluing import GluingSpec, cross_spoke_dense_regime
from ricci_gluing.graph import Edge


@dataclass(frozen=True)
class CouplingFixture:
    name: str
    pair: Edge
    entries: dict[Edge, Fraction]


@dataclass(frozen=True)
class PotentialFixture:
    """A potential for ``pair`` and whether it is known to attain W there."""

    name: str
    pair: Edge
    values: dict[int, int]
    expected_tight: bool


def _fill(entries: dict[Edge, Fraction], sources: Iterable[int], targets: Iterable[int], mass: Fraction) -> None:
    targets = tuple(targets)
    for x in sources:
        for y in targets:
            entries[(x, y)] = entries.get((x, y), Fraction(0)) + mass


def _diagonal(entries: dict[Edge, Fraction], vertices: Iterable[int], mass: Fraction) -> None:
    for vertex in vertices:
        entries[(vertex, vertex)] = mass


def _spoke_interior(spec: GluingSpec) -> tuple[int, ...]:
    """v_2..v_m: attached vertices of the second block other than v_1."""
    return spec.attached_v[1:]


def hub_to_attached_coupling(spec: GluingSpec) -> CouplingFixture:
    """Coupling of m_{u_0} and m_{u_1}; valid for m >= 2."""
    n, m = spec.n, spec.m
    s = n + m
    delta = Fraction(1, n) - Fraction(1, s)
    rest = tuple(range(2, n))
    entries: dict[Edge, Fraction] = {}
    _diagonal(entries, rest + (spec.v(0),), Fraction(1, s))
    _fill(entries, spec.attached_v, [spec.u(0)], Fraction(1, n * m))
    _fill(entries, spec.attached_v, [spec.v(0)], delta / m)
    _fill(entries, [spec.u(1)], rest, Fraction(1, (n - 2) * s))
    _fill(entries, spec.attached_v, rest, (delta - Fraction(1, (n - 2) * s)) / m)
    return CouplingFixture("hub_to_attached", (spec.u(0), spec.u(1)), entries)


def complete_cross_spoke_coupling(spec: GluingSpec) -> CouplingFixture:
    """Coupling of m_{u_0} and m_{v_1} when every vertex is attached (m = n - 1)."""
    n = spec.n
    s = 2 * n - 1
    delta = Fraction(1, n) - Fraction(1, s)
    interior = _spoke_interior(spec)
    entries: dict[Edge, Fraction] = {}
    _diagonal(entries, (spec.v(0),) + interior, Fraction(1, s))
    _fill(entries, [spec.v(1)], interior, Fraction(1, (n - 2) * s))
    _fill(entries, spec.attached_u, [spec.u(0)], Fraction(1, n * (n - 1)))
    _fill(entries, spec.attached_u, [spec.v(0)], delta / (n - 1))
    _fill(entries, spec.attached_u, interior, (delta - Fraction(1, (n - 2) * s)) / (n - 1))
    return CouplingFixture("complete_cross_spoke", (spec.u(0), spec.v(1)), entries)


def dense_cross_spoke_coupling(spec: GluingSpec) -> CouplingFixture:
    """Coupling of m_{u_0} and m_{v_1} for 2 <= m <= n - 3 above the regime split."""
    n, m = spec.n, spec.m
    s, k = n + m, spec.free_count
    delta = Fraction(1, n) - Fraction(1, s)
    interior = _spoke_interior(spec)
    entries: dict[Edge, Fraction] = {}
    _diagonal(entries, (spec.v(0),) + interior, Fraction(1, s))
    _fill(entries, [spec.v(1)], spec.free_v, Fraction(1, k * s))
    _fill(entries, spec.free_u, [spec.u(0)], Fraction(1, n * k))
    _fill(entries, spec.free_u, interior, (Fraction(1, s) - Fraction(1, n * k)) / (m - 1))
    _fill(entries, spec.attached_u, [spec.v(0)], delta / m)
    _fill(entries, spec.attached_u, spec.free_v, (Fraction(1, n) - Fraction(1, k * s)) / m)
    surplus = (Fraction(k, s) - Fraction(1, n)) / (m - 1)
    _fill(entries, spec.attached_u, interior, (delta - surplus) / m)
    return CouplingFixture("dense_cross_spoke", (spec.u(0), spec.v(1)), entries)


def near_complete_cross_spoke_coupling(spec: GluingSpec) -> CouplingFixture:
    """Coupling of m_{u_0} and m_{v_1} when exactly one vertex per block is free."""
    n = spec.n
    s = 2 * n - 2
    share = (Fraction(1, n) - Fraction(1, s)) / (n - 2)
    interior = _spoke_interior(spec)
    last_u, last_v = spec.u(n - 1), spec.v(n - 1)
    entries: dict[Edge, Fraction] = {}
    entries[(spec.v(1), last_v)] = Fraction(1, s)
    _diagonal(entries, (spec.v(0),) + interior, Fraction(1, s))
    entries[(last_u, spec.u(0))] = Fraction(1, s)
    _fill(entries, spec.attached_u, (spec.u(0), spec.v(0), last_v) + interior, share)
    return CouplingFixture("near_complete_cross_spoke", (spec.u(0), spec.v(1)), entries)


def sparse_cross_spoke_coupling(spec: GluingSpec) -> CouplingFixture:
    """Coupling of m_{u_0} and m_{v_1} for m <= n - 3 below the regime split."""
    n, m = spec.n, spec.m
    s, k = n + m, spec.free_count
    delta = Fraction(1, n) - Fraction(1, s)
    interior = _spoke_interior(spec)
    entries: dict[Edge, Fraction] = {}
    _diagonal(entries, (spec.v(0),) + interior, Fraction(1, s))
    _fill(entries, [spec.v(1)], spec.free_v, Fraction(1, k * s))
    _fill(entries, spec.free_u, [spec.u(0)], Fraction(1, n * k))
    _fill(entries, spec.free_u, interior, delta / k)
    spill = (Fraction(m, n) - Fraction(m - 1, s)) / k
    _fill(entries, spec.free_u, spec.free_v, (Fraction(1, s) - spill) / k)
    _fill(entries, spec.attached_u, [spec.v(0)], delta / m)
    _fill(entries, spec.attached_u, spec.free_v, (Fraction(1, s) - delta / m) / k)
    return CouplingFixture("sparse_cross_spoke", (spec.u(0), spec.v(1)), entries)


def _layered_values(spec: GluingSpec) -> dict[int, int]:
    """3 on free u, 2 on u_0 and attached u, 1 on v_0 and attached v, 0 on free v."""
    values = {vertex: 3 for vertex in spec.free_u}
    values.update({vertex: 2 for vertex in (spec.u(0),) + spec.attached_u})
    values.update({vertex: 1 for vertex in (spec.v(0),) + spec.attached_v})
    return values


def bridge_potential(spec: GluingSpec) -> PotentialFixture:
    return PotentialFixture("bridge_layers", (spec.u(0), spec.v(0)), _layered_values(spec), True)


def sparse_cross_spoke_potential(spec: GluingSpec) -> PotentialFixture:
    n, m = spec.n, spec.m
    tight = (2 * m + n) ** 2 <= 5 * n * n - 8 * n
    return PotentialFixture("sparse_cross_spoke_layers", (spec.u(0), spec.v(1)), _layered_values(spec), tight)


def complete_cross_spoke_potential(spec: GluingSpec) -> PotentialFixture:
    values = {vertex: -2 for vertex in _spoke_interior(spec)}
    values.update({vertex: -1 for vertex in (spec.u(0), spec.v(1), spec.v(0))})
    return PotentialFixture("complete_cross_spoke", (spec.u(0), spec.v(1)), values, True)


def dense_cross_spoke_potential(spec: GluingSpec) -> PotentialFixture:
    values = {vertex: 2 for vertex in range(1, spec.n)}
    values.update({vertex: 1 for vertex in (spec.u(0), spec.v(0), spec.v(1))})
    return PotentialFixture(
        "dense_cross_spoke", (spec.u(0), spec.v(1)), values, cross_spoke_dense_regime(spec)
    )


def hub_to_attached_potential(spec: GluingSpec) -> PotentialFixture:
    values = {vertex: -2 for vertex in range(2, spec.n)}
    values.update({vertex: -1 for vertex in (spec.u(0), spec.u(1), spec.v(0))})
    return PotentialFixture("hub_to_attached", (spec.u(0), spec.u(1)), values, spec.m >= 2)


def hub_to_free_potential(spec: GluingSpec) -> PotentialFixture:
    """Upper-bound potential for (u_0, u_{n-1}).

    Free vertices of the second block take value 1 so the potential stays
    1-Lipschitz; neither measure charges them. Tightness is recorded for the
    block sizes where it has been checked against the solver (n <= 9).
    """
    n, m = spec.n, spec.m
    last = spec.u(n - 1)
    values = {vertex: 2 for vertex in spec.attached_v}
    values.update({vertex: 1 for vertex in (spec.u(0), spec.v(0), last) + spec.free_v})
    tight = n <= 9 and m >= (2 if n <= 7 else 3)
    return PotentialFixture("hub_to_free", (spec.u(0), last), values, tight)


CouplingBuilder = Callable[[GluingSpec], CouplingFixture]
PotentialBuilder = Callable[[GluingSpec], PotentialFixture]
Applicability = Callable[[GluingSpec], bool]


def _sparse(spec: GluingSpec) -> bool:
    return not cross_spoke_dense_regime(spec)


COUPLINGS: dict[str, tuple[CouplingBuilder, Applicability]] = {
    "hub_to_attached": (
        hub_to_attached_coupling,
        lambda spec: spec.m >= 2 and spec.m * (spec.n - 2) >= spec.n,
    ),
    "complete_cross_spoke": (
        complete_cross_spoke_coupling,
        lambda spec: spec.m == spec.n - 1 and spec.n >= 4,
    ),
    "dense_cross_spoke": (
        dense_cross_spoke_coupling,
        lambda spec: 2 <= spec.m <= spec.n - 3 and cross_spoke_dense_regime(spec),
    ),
    "near_complete_cross_spoke": (
        near_complete_cross_spoke_coupling,
        lambda spec: spec.m == spec.n - 2,
    ),
    "sparse_cross_spoke": (
        sparse_cross_spoke_coupling,
        lambda spec: spec.m <= spec.n - 3 and _sparse(spec),
    ),
}

POTENTIALS: dict[str, tuple[PotentialBuilder, Applicability]] = {
    "complete_cross_spoke": (complete_cross_spoke_potential, lambda spec: spec.m == spec.n - 1),
    "bridge_layers": (bridge_potential, lambda spec: spec.m <= spec.n - 2),
    "dense_cross_spoke": (dense_cross_spoke_potential, lambda spec: True),
    "sparse_cross_spoke_layers": (sparse_cross_spoke_potential, lambda spec: True),
    "hub_to_attached": (hub_to_attached_potential, lambda spec: spec.n >= 3),
    "hub_to_free": (hub_to_free_potential, lambda spec: spec.m <= spec.n - 2),
}


def coupling(name: str, spec: GluingSpec) -> CouplingFixture:
    builder, applies = COUPLINGS[name]
    if not applies(spec):
        raise ClassEmptyForSpecError(f"coupling {name!r} does not apply when {spec}")
    return builder(spec)


def potential(name: str, spec: GluingSpec) -> PotentialFixture:
    builder, applies = POTENTIALS[name]
    if not applies(spec):
        raise ClassEmptyForSpecError(f"potential {name!r} does not apply when {spec}")
    return builder(spec)


def couplings_for(spec: GluingSpec) -> list[CouplingFixture]:
    return [builder(spec) for builder, applies in COUPLINGS.values() if applies(spec)]


def potentials_for(spec: GluingSpec) -> list[PotentialFixture]:
    return [builder(spec) for builder, applies in POTENTIALS.values() if applies(spec)]
