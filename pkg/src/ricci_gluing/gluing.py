"""The m-gluing of two complete graphs: construction, edge classes and closed forms.

Vertices u_i of the first block are labelled i and vertices v_j of the second
block n + j. The hubs u_0 and v_0 are joined by the bridge; u_0 is joined to
the attached vertices v_1..v_m and v_0 to u_1..u_m. The remaining vertices of
each block are free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from ricci_gluing.config import POSITIVITY_MIN_N
from ricci_gluing.errors import (
    ClassEmptyForSpecError,
    InvalidSpecError,
    NotAnEdgeError,
    NTooSmallError,
)
from ricci_gluing.graph import Edge, Graph, build_graph


class EdgeClass(str, Enum):
    BRIDGE = "Bridge"
    CROSS_SPOKE = "CrossSpoke"
    HUB_TO_ATTACHED = "HubToAttached"
    ATTACHED_PAIR = "AttachedPair"
    ATTACHED_TO_FREE = "AttachedToFree"
    HUB_TO_FREE = "HubToFree"
    FREE_PAIR = "FreePair"


@dataclass(frozen=True)
class GluingSpec:
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidSpecError(f"n must be at least 2, got n={self.n}")
        if not 1 <= self.m <= self.n - 1:
            raise InvalidSpecError(f"m must lie in 1..{self.n - 1}, got m={self.m}")

    def __str__(self) -> str:
        return f"n={self.n},m={self.m}"

    @property
    def vertex_count(self) -> int:
        return 2 * self.n

    @property
    def edge_count(self) -> int:
        return self.n * (self.n - 1) + 2 * self.m + 1

    @property
    def free_count(self) -> int:
        return self.n - 1 - self.m

    def u(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise InvalidSpecError(f"u_{i} does not exist for n={self.n}")
        return i

    def v(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise InvalidSpecError(f"v_{j} does not exist for n={self.n}")
        return self.n + j

    @property
    def attached_u(self) -> tuple[int, ...]:
        """u_1..u_m, the neighbours of v_0 in the first block."""
        return tuple(range(1, self.m + 1))

    @property
    def attached_v(self) -> tuple[int, ...]:
        return tuple(self.n + j for j in range(1, self.m + 1))

    @property
    def free_u(self) -> tuple[int, ...]:
        return tuple(range(self.m + 1, self.n))

    @property
    def free_v(self) -> tuple[int, ...]:
        return tuple(self.n + j for j in range(self.m + 1, self.n))

    def label(self, vertex: int) -> str:
        return f"u{vertex}" if vertex < self.n else f"v{vertex - self.n}"

    def mirror(self, vertex: int) -> int:
        """Image of a vertex under the block swap u_i <-> v_i."""
        return vertex + self.n if vertex < self.n else vertex - self.n


class ClosedForm(NamedTuple):
    """Exact curvature value (lower == upper) or a bracketing interval."""

    lower: Fraction
    upper: Fraction

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper


class PositivityWindow(NamedTuple):
    threshold: Fraction
    smallest_positive_m: int


def gluing_edges(spec: GluingSpec) -> list[Edge]:
    n, m = spec.n, spec.m
    edges: list[Edge] = []
    for offset in (0, n):
        edges.extend((offset + i, offset + j) for i in range(n) for j in range(i + 1, n))
    edges.append((0, n))
    edges.extend((0, n + i) for i in range(1, m + 1))
    edges.extend((j, n) for j in range(1, m + 1))
    return sorted(edges)


def build_gluing(spec: GluingSpec) -> Graph:
    return build_graph(gluing_edges(spec), vertex_count=spec.vertex_count)


def classify_edge(spec: GluingSpec, edge: Edge) -> EdgeClass:
    """Tag an edge with its symmetry class, identifying the two blocks by the mirror map."""
    a, b = sorted(int(vertex) for vertex in edge)
    n, m = spec.n, spec.m
    if a < 0 or b >= spec.vertex_count or (a, b) not in set(gluing_edges(spec)):
        raise NotAnEdgeError(f"({a}, {b}) is not an edge of the gluing graph {spec}")

    if a < n <= b:
        return EdgeClass.BRIDGE if (a, b) == (0, n) else EdgeClass.CROSS_SPOKE
    if a >= n:
        a, b = a - n, b - n
    if a == 0:
        return EdgeClass.HUB_TO_ATTACHED if b <= m else EdgeClass.HUB_TO_FREE
    attached = (a <= m) + (b <= m)
    if attached == 2:
        return EdgeClass.ATTACHED_PAIR
    return EdgeClass.ATTACHED_TO_FREE if attached == 1 else EdgeClass.FREE_PAIR


def _class_size(spec: GluingSpec, edge_class: EdgeClass) -> int:
    m, free = spec.m, spec.free_count
    sizes = {
        EdgeClass.BRIDGE: 1,
        EdgeClass.CROSS_SPOKE: 2 * m,
        EdgeClass.HUB_TO_ATTACHED: 2 * m,
        EdgeClass.ATTACHED_PAIR: m * (m - 1),
        EdgeClass.ATTACHED_TO_FREE: 2 * m * free,
        EdgeClass.HUB_TO_FREE: 2 * free,
        EdgeClass.FREE_PAIR: free * (free - 1),
    }
    return sizes[edge_class]


def present_classes(spec: GluingSpec) -> tuple[EdgeClass, ...]:
    return tuple(cls for cls in EdgeClass if _class_size(spec, cls) > 0)


def _require_present(spec: GluingSpec, edge_class: EdgeClass) -> None:
    if _class_size(spec, edge_class) == 0:
        raise ClassEmptyForSpecError(f"{edge_class.value} has no edges when {spec}")


def representative_edge(spec: GluingSpec, edge_class: EdgeClass) -> Edge:
    """A fixed edge of the class, on the first block where the class is mirrored."""
    _require_present(spec, edge_class)
    n = spec.n
    representatives = {
        EdgeClass.BRIDGE: (0, n),
        EdgeClass.CROSS_SPOKE: (0, n + 1),
        EdgeClass.HUB_TO_ATTACHED: (0, 1),
        EdgeClass.ATTACHED_PAIR: (1, 2),
        EdgeClass.ATTACHED_TO_FREE: (1, n - 1),
        EdgeClass.HUB_TO_FREE: (0, n - 1),
        EdgeClass.FREE_PAIR: (n - 2, n - 1),
    }
    return representatives[edge_class]


def cross_spoke_dense_regime(spec: GluingSpec) -> bool:
    """True when m >= (-n + sqrt(5n^2 - 8n)) / 2, decided in integers."""
    n, m = spec.n, spec.m
    return (2 * m + n) ** 2 >= 5 * n * n - 8 * n


def proof_regime_disagrees(spec: GluingSpec) -> bool:
    """True when the 5n^2 - 4n split would place m on the other side of the 5n^2 - 8n split."""
    n, m = spec.n, spec.m
    return cross_spoke_dense_regime(spec) != ((2 * m + n) ** 2 >= 5 * n * n - 4 * n)


def closed_form_kappa(spec: GluingSpec, edge_class: EdgeClass) -> ClosedForm:
    _require_present(spec, edge_class)
    n, m = spec.n, spec.m
    top = m == n - 1

    if edge_class is EdgeClass.BRIDGE:
        value = Fraction(2 * n - 2, 2 * n - 1) if top else Fraction(4 * m - 2 * n + 4, n + m)
    elif edge_class is EdgeClass.CROSS_SPOKE:
        if top:
            value = Fraction(3 * n - 2, n * (2 * n - 1))
        elif cross_spoke_dense_regime(spec):
            value = Fraction((2 + n) * m + 2 * n - n * n, n * (n + m))
        else:
            value = Fraction(m * m + 2 * (n + 1) * m - 2 * n * n + 4 * n, n * (n + m))
    elif edge_class is EdgeClass.HUB_TO_ATTACHED:
        if m == 1:
            value = Fraction(n - 1, n + 1)
        else:
            value = Fraction(n * n - m * n + 2 * m, n * (n + m))
    elif edge_class is EdgeClass.ATTACHED_PAIR:
        value = Fraction(n - 1, n)
    elif edge_class is EdgeClass.ATTACHED_TO_FREE:
        value = Fraction(n - 2, n)
    elif edge_class is EdgeClass.FREE_PAIR:
        value = Fraction(n - 2, n - 1)
    else:
        upper = Fraction((2 - n) * m + n * n - 2 * n + 2, (n - 1) * (n + m))
        if m == n - 2:
            lower = Fraction(1, n - 1)
        else:
            lower = Fraction((2 - n) * m + n * n - 3 * n + 3, (n - 1) * (n + m))
        return ClosedForm(lower, upper)
    return ClosedForm(value, value)


def positivity_window(n: int, *, threshold_shift: int = 0) -> PositivityWindow:
    """Every edge is positively curved exactly when threshold < m <= n - 1.

    ``threshold_shift`` moves the threshold by an integer; it exists only as a
    negative control for the verification suites.
    """
    if n < POSITIVITY_MIN_N:
        raise NTooSmallError(f"positivity window needs n >= {POSITIVITY_MIN_N}, got n={n}")
    threshold = Fraction(n * n - 2 * n, n + 2) + threshold_shift
    return PositivityWindow(threshold, math.floor(threshold) + 1)


def documented_smallest_positive_m(n: int) -> int:
    """M as stated in closed form: n - 2 for n in {5, 6}, n - 3 beyond."""
    if n < POSITIVITY_MIN_N:
        raise NTooSmallError(f"M is defined for n >= {POSITIVITY_MIN_N}, got n={n}")
    return n - 2 if n <= 6 else n - 3


def global_lower_bound_at_M(n: int) -> Fraction:  # noqa: N802
    if n < POSITIVITY_MIN_N:
        raise NTooSmallError(f"global bound needs n >= {POSITIVITY_MIN_N}, got n={n}")
    if n > 6:
        return Fraction(n - 6, n * (2 * n - 3))
    return Fraction(n - 2, n * (n - 1))


def jost_liu_class_bounds(spec: GluingSpec) -> dict[EdgeClass, Fraction]:
    """Closed-form Jost-Liu lower bounds for the hub-to-attached and cross-spoke edges.

    The hub-to-attached value holds for m >= 2 and the cross-spoke value for
    m <= n - 2; classes outside those ranges are omitted.
    """
    n, m = spec.n, spec.m
    bounds: dict[EdgeClass, Fraction] = {}
    if m >= 2:
        bounds[EdgeClass.HUB_TO_ATTACHED] = Fraction(n * n - n * m + m, n * (n + m))
    if m <= n - 2:
        bounds[EdgeClass.CROSS_SPOKE] = Fraction((m + 2 * n) * (m + 2 - n), n * (n + m))
    return bounds
