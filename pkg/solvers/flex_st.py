"""
(2,2)-Flex-ST solver
Workflow:
1. Base edge set from a min-cost flow of value 4 (safe capacity 2, unsafe 1)
2. Violated family: s-side cuts with one safe and two unsafe base edges
3. Three paths of the max-flow decomposition covering every safe edge of a violated cut
4. Split the family by path into three ring families
5. Cover each ring family exactly with the remaining edges and return the union
"""
import logging
from typing import Iterable, List, Tuple

from network.cuts import CutFamily, cut_table, weighted_min_cut
from network.families import is_ring_family
from network.feasibility import check_feasible
from network.graph import FlexGraph, Requirement, Scope, Solution, boundary
from solvers.cover import ring_cover_exact
from solvers.flow import CapacitatedNet, Path, decompose, max_flow, min_cost_flow
from utils.errors import InfeasibleInstanceError, InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)

FLOW_TARGET = 4


def _check_trichotomy(graph: FlexGraph, F: Iterable[int], s: int, t: int) -> None:
    table = cut_table(graph, Scope.pair(s, t))
    mask = graph.edge_mask(F)
    for index in range(len(table.cuts)):
        safe, total = table.counts(mask, index)
        if not (safe >= 2 or total >= 4 or (safe == 1 and total == 3)):
            raise InvariantViolation(
                f"Base cut {table.cut(index)} has {safe} safe / {total} total edges"
            )


def base_solution(graph: FlexGraph, s: int, t: int) -> Solution:
    """
    2-approximate starting edge set for (2,2)-Flex-ST

    Every s-t cut of the result has >= 2 safe edges, >= 4 edges, or exactly
    one safe and two unsafe edges.

    Args:
        graph: The multigraph
        s, t: Terminals

    Returns:
        Support of a min-cost flow of value 4 (meta: flow, flow_cost)
    """
    Requirement.pair(2, 2, s, t).validate_for(graph)
    net = CapacitatedNet.safety_weighted(graph)
    value, _ = max_flow(net, s, t)
    if value < FLOW_TARGET:
        weights = {i: net.capacities[i] for i in graph.edge_ids}
        _, cut = weighted_min_cut(graph, weights, Scope.pair(s, t))
        raise InfeasibleInstanceError(
            f"Capacity {value} < {FLOW_TARGET} between {s} and {t}; no (2,2) solution exists", cut=cut
        )

    result = min_cost_flow(net, s, t, FLOW_TARGET)
    solution = Solution.of(graph, result.support, flow=result.flow, flow_cost=result.cost)
    _check_trichotomy(graph, solution.edge_ids, s, t)
    logger.info(f"Base solution: {len(solution.edge_ids)} edges, cost {solution.cost} (flow cost {result.cost})")
    return solution


def violated_family(graph: FlexGraph, F: Iterable[int], s: int, t: int) -> CutFamily:
    """
    s-side cuts with exactly one safe and two unsafe edges of F

    Args:
        graph: The multigraph
        F: Base edge set
        s, t: Terminals

    Returns:
        The family to cover
    """
    scope = Scope.pair(s, t)
    table = cut_table(graph, scope)
    mask = graph.edge_mask(graph.check_edge_ids(F))
    cuts = []
    for index in range(len(table.cuts)):
        safe, total = table.counts(mask, index)
        if safe == 1 and total == 3:
            cuts.append(table.cut(index))
    return CutFamily(tuple(cuts), f"flex-st (2,2) violated {scope}", graph.vertex_count, False)


def critical_safe_edges(graph: FlexGraph, F: Iterable[int], family: CutFamily) -> frozenset:
    """Safe edges of F crossing at least one family cut"""
    F = graph.check_edge_ids(F)
    safe = set()
    for cut in family.cuts:
        b = boundary(graph, F, cut)
        safe.update(e for e in b.edge_ids if graph.edges[e].safe)
    return frozenset(safe)


def flow_paths(graph: FlexGraph, F: Iterable[int], s: int, t: int) -> List[Path]:
    """The four unit paths of a max flow on F with safe capacity 2 and unsafe capacity 1"""
    net = CapacitatedNet.safety_weighted(graph, F)
    value, flow = max_flow(net, s, t)
    if value != FLOW_TARGET:
        raise InvariantViolation(f"Max flow on the base edge set is {value}, expected {FLOW_TARGET}")
    return decompose(graph, flow, s, t)


def support_paths(graph: FlexGraph, F: Iterable[int], s: int, t: int) -> Tuple[Path, Path, Path]:
    """
    Three s-t paths covering every safe edge that crosses a violated cut

    Args:
        graph: The multigraph
        F: Base edge set with a nonempty violated family
        s, t: Terminals

    Returns:
        The first three paths of the deterministic four-path decomposition
    """
    F = graph.check_edge_ids(F)
    family = violated_family(graph, F, s, t)
    if not family:
        raise PreconditionError("support_paths needs a nonempty violated family")
    paths = flow_paths(graph, F, s, t)
    chosen = tuple(paths[:3])
    on_paths = set().union(*(p.edge_ids for p in chosen))
    missing = critical_safe_edges(graph, F, family) - on_paths
    if missing:
        raise InvariantViolation(f"Safe edges {sorted(missing)} lie on none of the chosen paths")
    return chosen


def partition_families(
    graph: FlexGraph,
    family: CutFamily,
    paths: Iterable[Path],
    F: Iterable[int]
) -> Tuple[CutFamily, ...]:
    """
    Split the violated family by which path carries each cut's safe edge

    Args:
        graph: The multigraph
        family: Violated family of the base edge set
        paths: The chosen paths
        F: Base edge set

    Returns:
        One family per path; a cut appears in every family whose path carries its safe edge
    """
    F = graph.check_edge_ids(F)
    paths = list(paths)
    buckets: List[list] = [[] for _ in paths]
    for cut in family.cuts:
        safe_edges = [e for e in boundary(graph, F, cut).edge_ids if graph.edges[e].safe]
        if len(safe_edges) != 1:
            raise PreconditionError(f"Cut {cut} has {len(safe_edges)} safe edges, expected 1", witness=cut)
        homes = [i for i, path in enumerate(paths) if safe_edges[0] in path]
        if not homes:
            raise PreconditionError(f"Safe edge {safe_edges[0]} of {cut} lies on no path", witness=cut)
        for i in homes:
            buckets[i].append(cut)

    families = tuple(
        CutFamily(tuple(bucket), f"flex-st ring {i}", graph.vertex_count, False)
        for i, bucket in enumerate(buckets)
    )
    union = set().union(*(f.member_sets for f in families)) if families else set()
    if union != family.member_sets:
        raise InvariantViolation("Ring families do not add up to the violated family")
    return families


def solve_22(graph: FlexGraph, s: int, t: int) -> Solution:
    """
    5-approximation for (2,2)-Flex-ST

    Args:
        graph: The multigraph
        s, t: Terminals

    Returns:
        Feasible Solution (meta: base_cost, family_size, ring_costs)
    """
    logger.info("=" * 80)
    logger.info(f"Solving (2,2)-Flex-ST between {s} and {t}")
    logger.info("=" * 80)

    # Step 1: base edge set
    base = base_solution(graph, s, t)

    # Step 2: violated family
    family = violated_family(graph, base.edge_ids, s, t)
    logger.info(f"Violated family: {len(family)} cuts")
    if not family:
        return Solution.of(graph, base.edge_ids, base_cost=base.cost, family_size=0, ring_costs=[])

    # Steps 3-4: paths and ring families
    paths = support_paths(graph, base.edge_ids, s, t)
    rings = partition_families(graph, family, paths, base.edge_ids)

    # Step 5: exact covers over the remaining edges
    candidates = graph.edge_ids - base.edge_ids
    added = set()
    ring_costs = []
    for ring in rings:
        verdict = is_ring_family(ring)
        if not verdict:
            raise InvariantViolation(f"{ring.provenance}: {verdict.describe()}")
        try:
            cover = ring_cover_exact(graph, candidates, ring)
        except InfeasibleInstanceError as exc:
            raise InfeasibleInstanceError(f"Instance is infeasible for (2,2): {exc}", cut=exc.cut)
        ring_costs.append(cover.cost)
        added.update(cover.edge_ids)

    solution = Solution.of(
        graph, base.edge_ids | added,
        base_cost=base.cost, family_size=len(family), ring_costs=ring_costs,
    )
    verdict = check_feasible(graph, solution.edge_ids, Requirement.pair(2, 2, s, t))
    if not verdict:
        raise InvariantViolation(f"(2,2) output infeasible: {verdict.describe()}")
    logger.info(f"(2,2)-Flex-ST solution: {len(solution.edge_ids)} edges, cost {solution.cost}")
    return solution
