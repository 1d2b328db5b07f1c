"""Rational two-phase simplex, used as an independent Wasserstein oracle."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ricci_gluing.config import ORACLE_MAX_SUPPORT
from ricci_gluing.errors import InfeasiblePlanError, OracleTooLargeError
from ricci_gluing.graph import Graph, VertexMeasure
from ricci_gluing.metrics import TRANSPORT_SOLVES
from ricci_gluing.transport import check_support

logger = logging.getLogger(__name__)


class UnboundedProgramError(RuntimeError):
    """Raised when the objective decreases without bound."""


@dataclass(frozen=True)
class SimplexResult:
    value: Fraction
    solution: tuple[Fraction, ...]
    pivots: int


class RationalSimplex:
    """Solve ``min c.x`` subject to ``A x = b``, ``x >= 0`` exactly.

    Phase one minimises the sum of artificial variables; phase two the real
    objective. Both use Bland's rule, so the method terminates on degenerate
    problems such as transportation polytopes.
    """

    def __init__(
        self,
        a: Sequence[Sequence[Fraction | int]],
        b: Sequence[Fraction | int],
        c: Sequence[Fraction | int],
    ) -> None:
        self.rows = len(a)
        self.columns = len(c)
        if len(b) != self.rows or any(len(row) != self.columns for row in a):
            raise ValueError("constraint matrix shape does not match b and c")

        self.cost = [Fraction(value) for value in c]
        self.tableau: list[list[Fraction]] = []
        for i, row in enumerate(a):
            rhs = Fraction(b[i])
            sign = -1 if rhs < 0 else 1
            artificial = [Fraction(1 if k == i else 0) for k in range(self.rows)]
            self.tableau.append([sign * Fraction(v) for v in row] + artificial + [sign * rhs])
        self.basis = [self.columns + i for i in range(self.rows)]
        self.pivots = 0

    @property
    def _rhs(self) -> int:
        return self.columns + self.rows

    def _pivot(self, row: int, column: int, objective: list[Fraction]) -> None:
        pivot_row = self.tableau[row]
        pivot = pivot_row[column]
        self.tableau[row] = pivot_row = [value / pivot for value in pivot_row]
        for i, other in enumerate(self.tableau):
            if i != row and other[column] != 0:
                factor = other[column]
                self.tableau[i] = [value - factor * p for value, p in zip(other, pivot_row)]
        factor = objective[column]
        if factor != 0:
            objective[:] = [value - factor * p for value, p in zip(objective, pivot_row)]
        self.basis[row] = column
        self.pivots += 1

    def _reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        objective = list(cost) + [Fraction(0)]
        for i, basic in enumerate(self.basis):
            weight = cost[basic]
            if weight != 0:
                objective = [value - weight * t for value, t in zip(objective, self.tableau[i])]
        return objective

    def _iterate(self, objective: list[Fraction], allowed: int) -> None:
        while True:
            entering = next((j for j in range(allowed) if objective[j] < 0), None)
            if entering is None:
                return
            best: tuple[Fraction, int, int] | None = None
            for i, row in enumerate(self.tableau):
                if row[entering] > 0:
                    candidate = (row[self._rhs] / row[entering], self.basis[i], i)
                    if best is None or candidate[:2] < best[:2]:
                        best = candidate
            if best is None:
                raise UnboundedProgramError(f"column {entering} is unbounded")
            self._pivot(best[2], entering, objective)

    def _drop_artificials(self) -> None:
        row = 0
        while row < len(self.tableau):
            if self.basis[row] < self.columns:
                row += 1
                continue
            column = next((j for j in range(self.columns) if self.tableau[row][j] != 0), None)
            if column is None:
                del self.tableau[row]
                del self.basis[row]
                continue
            self._pivot(row, column, [Fraction(0)] * (self._rhs + 1))
            row += 1

    def solve(self) -> SimplexResult:
        phase_one_cost = [Fraction(0)] * self.columns + [Fraction(1)] * self.rows
        objective = self._reduced_costs(phase_one_cost)
        self._iterate(objective, allowed=self.columns + self.rows)
        if -objective[self._rhs] != 0:
            raise InfeasiblePlanError("linear program has no feasible point")
        self._drop_artificials()

        phase_two_cost = self.cost + [Fraction(0)] * self.rows
        objective = self._reduced_costs(phase_two_cost)
        self._iterate(objective, allowed=self.columns)

        solution = [Fraction(0)] * self.columns
        for i, basic in enumerate(self.basis):
            solution[basic] = self.tableau[i][self._rhs]
        value = sum((c * x for c, x in zip(self.cost, solution)), Fraction(0))
        return SimplexResult(value=value, solution=tuple(solution), pivots=self.pivots)


def wasserstein_bruteforce(
    g: Graph,
    mu: VertexMeasure,
    nu: VertexMeasure,
    max_support: int = ORACLE_MAX_SUPPORT,
) -> Fraction:
    """W1 by solving the full transportation LP over supp(mu) x supp(nu)."""
    check_support(g, mu)
    check_support(g, nu)
    combined = set(mu.vertices) | set(nu.vertices)
    if len(combined) > max_support:
        raise OracleTooLargeError(
            f"combined support has {len(combined)} vertices; the oracle accepts at most {max_support}"
        )

    sources, targets = mu.support, nu.support
    pairs = [(u, v) for u, _ in sources for v, _ in targets]
    a: list[list[int]] = []
    b: list[Fraction] = []
    for u, mass in sources:
        a.append([1 if pair[0] == u else 0 for pair in pairs])
        b.append(mass)
    for v, mass in targets:
        a.append([1 if pair[1] == v else 0 for pair in pairs])
        b.append(mass)
    c = [int(g.distance_matrix[u, v]) for u, v in pairs]

    result = RationalSimplex(a, b, c).solve()
    TRANSPORT_SOLVES.labels("simplex").inc()
    logger.debug("simplex oracle: %d variables, %d pivots, W=%s", len(pairs), result.pivots, result.value)
    return result.value
