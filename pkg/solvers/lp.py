"""
Flex-Steiner LP relaxation
Separation oracles (B-cut and capacitated constraints), a cutting-plane
optimizer on scipy's HiGHS backend, and the augmentation-validity check
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from config.settings import settings
from network.cuts import cut_table, weighted_min_cut
from network.families import violated_cuts_for_augmentation
from network.feasibility import check_feasible
from network.graph import Cut, FlexGraph, Requirement, Scope, ScopeKind, Solution
from utils.errors import (
    CapacityError,
    InfeasibleInstanceError,
    NonConvergenceError,
    PreconditionError,
    StructuralError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FractionalSolution:
    """Edge values x_e in [0,1] (floating point)"""
    values: Dict[int, float] = field(hash=False)

    @classmethod
    def from_array(cls, array: Iterable[float]) -> "FractionalSolution":
        return cls({i: float(v) for i, v in enumerate(array)})

    @classmethod
    def constant(cls, graph: FlexGraph, value: float) -> "FractionalSolution":
        return cls({i: float(value) for i in range(graph.edge_count)})

    def validate(self, graph: FlexGraph, tol: Optional[float] = None) -> None:
        tol = settings.lp_feasibility_tol if tol is None else tol
        for edge_id, value in self.values.items():
            if not 0 <= edge_id < graph.edge_count:
                raise StructuralError(f"Unknown edge id {edge_id}")
            if value < -tol or value > 1 + tol:
                raise StructuralError(f"x[{edge_id}] = {value} outside [0,1]")

    def as_array(self, edge_count: int) -> np.ndarray:
        array = np.zeros(edge_count)
        for edge_id, value in self.values.items():
            array[edge_id] = value
        return array

    def cost(self, graph: FlexGraph) -> float:
        return sum(float(graph.edges[i].cost) * v for i, v in self.values.items())

    def __getitem__(self, edge_id: int) -> float:
        return self.values.get(edge_id, 0.0)

    def to_dict(self) -> Dict[str, float]:
        return {str(i): v for i, v in sorted(self.values.items()) if v > 0}


class ConstraintKind(str, Enum):
    B_CUT = "b-cut"
    CAPACITATED = "capacitated"


@dataclass(frozen=True)
class LPConstraint:
    """
    One LP row on cut S
    B_CUT:        sum of x over δ(S) - B >= p
    CAPACITATED:  (p+q) x(δ(S) ∩ safe) + p x(δ(S) ∩ unsafe) >= p(p+q)
    """
    kind: ConstraintKind
    cut: Cut
    p: int
    q: int
    B: FrozenSet[int] = frozenset()

    def __post_init__(self):
        if self.kind is ConstraintKind.CAPACITATED and self.B:
            raise StructuralError("Capacitated constraints take no failure set")
        if len(self.B) > self.q:
            raise StructuralError(f"|B| = {len(self.B)} exceeds q = {self.q}")

    @property
    def key(self) -> Tuple[str, Tuple[int, ...], Tuple[int, ...]]:
        return (self.kind.value, self.cut.key, tuple(sorted(self.B)))

    def row(self, graph: FlexGraph) -> Tuple[np.ndarray, float]:
        """Coefficient vector and right-hand side of the >= row"""
        coefficients = np.zeros(graph.edge_count)
        for edge_id, edge in enumerate(graph.edges):
            if not edge.crosses(self.cut.members):
                continue
            if self.kind is ConstraintKind.CAPACITATED:
                coefficients[edge_id] = self.p + self.q if edge.safe else self.p
            elif edge_id not in self.B:
                coefficients[edge_id] = 1.0
        if self.kind is ConstraintKind.CAPACITATED:
            return coefficients, float(self.p * (self.p + self.q))
        return coefficients, float(self.p)

    def slack(self, graph: FlexGraph, x: FractionalSolution) -> float:
        coefficients, rhs = self.row(graph)
        return float(coefficients @ x.as_array(graph.edge_count)) - rhs

    def __str__(self) -> str:
        if self.kind is ConstraintKind.CAPACITATED:
            return f"capacitated {self.cut}"
        return f"b-cut {self.cut} B={sorted(self.B)}"


Oracle = Callable[[FlexGraph, Requirement, FractionalSolution], Optional[LPConstraint]]


def _tol(tol: Optional[float]) -> float:
    return settings.lp_feasibility_tol if tol is None else tol


def _capacitated_violation(
    graph: FlexGraph,
    req: Requirement,
    x: FractionalSolution,
    tol: float
) -> Tuple[float, Optional[LPConstraint]]:
    p, q = req.p, req.q
    weights = {
        i: (p + q) * x[i] if edge.safe else p * x[i]
        for i, edge in enumerate(graph.edges)
    }
    value, cut = weighted_min_cut(graph, weights, req.scope)
    if value < p * (p + q) - tol:
        return value, LPConstraint(ConstraintKind.CAPACITATED, cut, p, q)
    return value, None


def prefix_failure_set(graph: FlexGraph, cut: Cut, x: FractionalSolution, q: int) -> FrozenSet[int]:
    """The min(q, |δ(S) ∩ unsafe|) unsafe boundary edges with the largest x (ties by id)"""
    unsafe = [
        i for i, edge in enumerate(graph.edges)
        if not edge.safe and edge.crosses(cut.members)
    ]
    unsafe.sort(key=lambda i: (-x[i], i))
    return frozenset(unsafe[:q])


def separate_general(
    graph: FlexGraph,
    req: Requirement,
    x: FractionalSolution,
    tol: Optional[float] = None
) -> Optional[LPConstraint]:
    """
    Separation by min cuts over every failure set

    Capacitated rows first, then one min cut of x on E - B for each set B
    of min(q, |unsafe|) unsafe edges.

    Args:
        graph: The multigraph
        req: (p,q) requirement with q <= settings.separation_q_bound
        x: Fractional point
        tol: Violation tolerance

    Returns:
        First violated constraint, or None
    """
    tol = _tol(tol)
    if req.q > settings.separation_q_bound:
        raise CapacityError("q", req.q, settings.separation_q_bound)

    _, violated = _capacitated_violation(graph, req, x, tol)
    if violated:
        return violated

    unsafe = sorted(graph.unsafe_ids)
    for failed in combinations(unsafe, min(req.q, len(unsafe))):
        removed = frozenset(failed)
        weights = {i: 0.0 if i in removed else x[i] for i in range(graph.edge_count)}
        value, cut = weighted_min_cut(graph, weights, req.scope)
        if value < req.p - tol:
            crossing = frozenset(i for i in removed if graph.edges[i].crosses(cut.members))
            return LPConstraint(ConstraintKind.B_CUT, cut, req.p, req.q, crossing)
    return None


@lru_cache(maxsize=64)
def _cut_matrices(graph: FlexGraph, scope: Scope) -> Tuple[np.ndarray, np.ndarray]:
    """(cuts x edges) float incidence matrices for safe and unsafe boundary edges"""
    table = cut_table(graph, scope)
    m = graph.edge_count
    crossing = np.array(
        [[mask >> e & 1 for e in range(m)] for mask in table.all_masks], dtype=float
    ).reshape(len(table.cuts), m)
    safe = np.array([1.0 if edge.safe else 0.0 for edge in graph.edges])
    return crossing * safe, crossing * (1.0 - safe)


def _cut_sums(graph: FlexGraph, req: Requirement, x: FractionalSolution):
    safe_cross, unsafe_cross = _cut_matrices(graph, req.scope)
    xv = x.as_array(graph.edge_count)
    xs = safe_cross @ xv
    xu = unsafe_cross @ xv
    if req.q > 0:
        unsafe_values = unsafe_cross * xv
        top = -np.sort(-unsafe_values, axis=1)[:, :req.q].sum(axis=1)
    else:
        top = np.zeros_like(xs)
    return xs, xu, top


def separate_fgc(
    graph: FlexGraph,
    req: Requirement,
    x: FractionalSolution,
    tol: Optional[float] = None
) -> Optional[LPConstraint]:
    """
    Separation for spanning requirements

    Once every capacitated row holds, a violated B-cut has capacitated
    weight at most twice the capacitated min cut, so only those cuts are
    checked, each against its prefix failure set.

    Args:
        graph: The multigraph
        req: Spanning (p,q) requirement
        x: Fractional point
        tol: Violation tolerance

    Returns:
        First violated constraint in canonical cut order, or None
    """
    tol = _tol(tol)
    if req.scope.kind is not ScopeKind.SPANNING:
        raise PreconditionError(f"separate_fgc needs a spanning requirement, got {req.scope}")
    p, q = req.p, req.q

    min_weight, violated = _capacitated_violation(graph, req, x, tol)
    if violated:
        return violated

    xs, xu, top = _cut_sums(graph, req, x)
    weights = (p + q) * xs + p * xu
    table = cut_table(graph, req.scope)
    for index in np.flatnonzero(weights <= 2 * min_weight + tol):
        if xs[index] + xu[index] - top[index] < p - tol:
            cut = table.cut(int(index))
            return LPConstraint(ConstraintKind.B_CUT, cut, p, q, prefix_failure_set(graph, cut, x, q))
    return None


def separate_enumerated(
    graph: FlexGraph,
    req: Requirement,
    x: FractionalSolution,
    tol: Optional[float] = None
) -> Optional[LPConstraint]:
    """
    Separation by scanning every enumerated scope cut

    Capacitated rows are compared after dividing by p+q so both kinds have
    right-hand side p.

    Args:
        graph: The multigraph
        req: (p,q) requirement, any scope
        x: Fractional point
        tol: Violation tolerance

    Returns:
        Most violated constraint (capacitated first on ties), or None
    """
    tol = _tol(tol)
    p, q = req.p, req.q
    xs, xu, top = _cut_sums(graph, req, x)
    capacitated = p - xs - p * xu / (p + q)
    b_cut = p - (xs + xu - top)

    table = cut_table(graph, req.scope)
    cap_index = int(np.argmax(capacitated))
    b_index = int(np.argmax(b_cut))
    if max(capacitated[cap_index], b_cut[b_index]) <= tol:
        return None
    if capacitated[cap_index] >= b_cut[b_index]:
        return LPConstraint(ConstraintKind.CAPACITATED, table.cut(cap_index), p, q)
    cut = table.cut(b_index)
    return LPConstraint(ConstraintKind.B_CUT, cut, p, q, prefix_failure_set(graph, cut, x, q))


def select_oracle(req: Requirement) -> Oracle:
    """separate_fgc for spanning scopes, separate_general for small q, else the full scan"""
    if req.scope.kind is ScopeKind.SPANNING:
        return separate_fgc
    if req.q <= settings.separation_q_bound:
        return separate_general
    return separate_enumerated


def cutting_plane_solve(
    graph: FlexGraph,
    req: Requirement,
    oracle: Optional[Oracle] = None,
    iteration_cap: Optional[int] = None
) -> Tuple[float, FractionalSolution]:
    """
    Optimize the LP relaxation by cutting planes

    Starts from the bounds 0 <= x <= 1 alone and adds one violated
    constraint per round until the oracle finds none.

    Args:
        graph: The multigraph
        req: (p,q) requirement (p >= 1)
        oracle: Separation routine (default: select_oracle(req))
        iteration_cap: Round limit (default: settings.lp_iteration_cap)

    Returns:
        (LP value, optimal fractional point)
    """
    req.validate_for(graph)
    verdict = check_feasible(graph, graph.edge_ids, req)
    if not verdict:
        raise InfeasibleInstanceError(
            f"Instance infeasible for {req}: {verdict.describe()}", cut=verdict.witness
        )
    oracle = oracle or select_oracle(req)
    iteration_cap = iteration_cap or settings.lp_iteration_cap

    m = graph.edge_count
    costs = np.array([float(edge.cost) for edge in graph.edges])
    rows: List[np.ndarray] = []
    rhs: List[float] = []
    seen = set()

    for iteration in range(1, iteration_cap + 1):
        result = linprog(
            costs,
            A_ub=-np.array(rows) if rows else None,
            b_ub=-np.array(rhs) if rhs else None,
            bounds=[(0.0, 1.0)] * m,
            method="highs",
            options={"primal_feasibility_tolerance": 1e-9, "dual_feasibility_tolerance": 1e-9},
        )
        if result.status != 0:
            raise NonConvergenceError(f"LP round {iteration} failed: {result.message}")

        x = FractionalSolution.from_array(np.clip(result.x, 0.0, 1.0))
        constraint = oracle(graph, req, x)
        if constraint is None:
            x.validate(graph)
            logger.info(f"Cutting planes for {req}: value {result.fun:.6f} after {iteration} rounds")
            return float(result.fun), x
        if constraint.key in seen:
            raise NonConvergenceError(f"Oracle returned pooled constraint {constraint} again")

        seen.add(constraint.key)
        row, bound = constraint.row(graph)
        rows.append(row)
        rhs.append(bound)
        logger.debug(f"Round {iteration}: LP {result.fun:.6f}, added {constraint}")

    raise NonConvergenceError(f"Cutting planes hit the cap of {iteration_cap} rounds")


@dataclass(frozen=True)
class ValidityVerdict:
    """VALID, or the first violated cut whose residual x-mass falls below 1"""
    valid: bool
    cut: Optional[Cut] = None
    mass: float = 0.0
    checked: int = 0

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return f"VALID ({self.checked} cuts)"
        return f"INVALID at {self.cut}: residual mass {self.mass:.9f}"


def check_augmentation_validity(
    graph: FlexGraph,
    req: Requirement,
    x: FractionalSolution,
    F1: Solution,
    tol: Optional[float] = None,
    oracle: Optional[Oracle] = None
) -> ValidityVerdict:
    """
    Check that x fractionally covers the augmentation family of F1

    Args:
        graph: The multigraph
        req: Target (p,q) requirement
        x: LP-feasible point for req
        F1: (p,q-1)-feasible Solution
        tol: Violation tolerance
        oracle: Separation routine used to confirm x is LP-feasible

    Returns:
        ValidityVerdict; every violated cut S of F1 needs x(δ(S) - F1) >= 1
    """
    tol = _tol(tol)
    x.validate(graph, tol)
    violated = (oracle or select_oracle(req))(graph, req, x)
    if violated is not None:
        raise PreconditionError(f"x is not LP-feasible: violates {violated}", witness=violated.cut)

    family = violated_cuts_for_augmentation(graph, F1.edge_ids, req)
    for cut in family.cuts:
        mass = sum(
            x[i] for i, edge in enumerate(graph.edges)
            if i not in F1.edge_ids and edge.crosses(cut.members)
        )
        if mass < 1 - tol:
            logger.warning(f"Augmentation cover fails at {cut}: mass {mass}")
            return ValidityVerdict(False, cut, mass, len(family))
    return ValidityVerdict(True, checked=len(family))
