"""
Spanning (p,q)-Flex Graph Connectivity
Workflow:
1. Exact (p,0) base: a minimum-cost p-edge-connected spanning subgraph
2. (p,0) -> (p,1) by one uncrossable cover
3. Each further level either by one uncrossable cover (p = 2) or in p
   stages, one per safe-edge count of the tight cuts
"""
import logging
from typing import Callable, Optional

from network.cuts import cut_table
from network.families import is_uncrossable, stage_family, violated_cuts_for_augmentation
from network.feasibility import check_feasible
from network.graph import FlexGraph, Requirement, Scope, Solution
from solvers.cover import wgmv_cover
from solvers.exact import exact_oracle
from utils.errors import (
    InvariantViolation,
    UncrossableFamilyError,
    UnsupportedRegimeError,
)

logger = logging.getLogger(__name__)

BaseSolver = Callable[[FlexGraph, int], Solution]


def base_p0(graph: FlexGraph, p: int) -> Solution:
    """
    Minimum-cost spanning subgraph with every cut crossed by >= p edges

    Args:
        graph: The multigraph (p-edge-connected)
        p: Edge connectivity

    Returns:
        Optimal (p,0) Solution from the exact oracle
    """
    solution = exact_oracle.opt_flex(graph, Requirement.spanning(p, 0))
    logger.info(f"(p,0) base with p={p}: cost {solution.cost}")
    return solution


def single_family_valid(p: int, q: int) -> bool:
    """Whether (p,q) -> (p,q+1) is one uncrossable cover"""
    return p == 2 or q == 0


def stage_guaranteed(p: int, q: int) -> bool:
    """Whether every stage family of (p,q) -> (p,q+1) is uncrossable"""
    return q <= 2 or (q == 3 and p % 2 == 0)


def is_supported(p: int, q: int, staged: bool = False) -> bool:
    if p < 1 or q < 0:
        return False
    if p == 2 and not staged:
        return True
    return all(level == 0 or stage_guaranteed(p, level) for level in range(q))


def approximation_factor(p: int, q: int, staged: bool = False) -> int:
    """
    Proven approximation factor of solve_fgc for (p,q)

    The base counts as a 2-approximation, which the exact base only improves.

    Args:
        p, q: Target levels
        staged: Whether p = 2 is routed through the staged augmentation

    Returns:
        2q+2 for single-family p = 2, otherwise 2 + 2 + 2p per level above 1
    """
    if not is_supported(p, q, staged):
        raise UnsupportedRegimeError(f"No proven guarantee for ({p},{q})-FGC")
    if p == 2 and not staged:
        return 2 * q + 2
    if q == 0:
        return 2
    return 4 + 2 * p * (q - 1)


def _check_level(graph: FlexGraph, H, p: int, q: int, what: str) -> None:
    verdict = check_feasible(graph, H, Requirement.spanning(p, q))
    if not verdict:
        raise InvariantViolation(f"{what} is not ({p},{q})-feasible: {verdict.describe()}")


def augment_one_level(graph: FlexGraph, F1: Solution, p: int, q: int) -> Solution:
    """
    Raise a (p,q)-feasible spanning solution to (p,q+1) with one cover

    Only valid when the violated family is uncrossable: p = 2, or q = 0.

    Args:
        graph: The multigraph
        F1: (p,q)-feasible Solution
        p, q: Current levels

    Returns:
        F1 plus a primal-dual cover of the violated family
    """
    if not single_family_valid(p, q):
        raise UnsupportedRegimeError(
            f"({p},{q}) -> ({p},{q + 1}) is not a single uncrossable cover; use staged_augment"
        )
    family = violated_cuts_for_augmentation(graph, F1.edge_ids, Requirement.spanning(p, q + 1))
    verdict = is_uncrossable(family)
    if not verdict:
        raise InvariantViolation(f"Augmentation family ({p},{q}) -> ({p},{q + 1}) crosses: {verdict.describe()}")

    cover = wgmv_cover(graph, graph.edge_ids - F1.edge_ids, family, check_uncrossable=False)
    result = F1.union(graph, cover.edge_ids)
    _check_level(graph, result.edge_ids, p, q + 1, "Augmented solution")
    logger.info(
        f"Level ({p},{q}) -> ({p},{q + 1}): {len(family)} cuts, added {len(cover.edge_ids)} edges, "
        f"cost {cover.cost}"
    )
    return result


def _check_stage_precondition(graph: FlexGraph, H, p: int, q: int, stage: int) -> None:
    # Tight cuts (p+q edges) carry at least `stage` safe edges
    table = cut_table(graph, Scope.spanning())
    mask = graph.edge_mask(H)
    for index in range(len(table.cuts)):
        safe, total = table.counts(mask, index)
        if total == p + q and safe < stage:
            raise InvariantViolation(
                f"Stage {stage}: tight cut {table.cut(index)} has only {safe} safe edges"
            )


def staged_augment(graph: FlexGraph, F: Solution, p: int, q: int) -> Solution:
    """
    Raise a (p,q)-feasible spanning solution to (p,q+1) in p stages

    Stage i covers the tight cuts of the current H (p+q edges) holding
    exactly i safe edges; each stage family is recomputed from H.

    Args:
        graph: The multigraph
        F: (p,q)-feasible Solution
        p, q: Current levels

    Returns:
        (p,q+1)-feasible Solution (meta: stage_costs)

    Raises:
        UncrossableFamilyError: a stage family crosses outside the proven range
    """
    _check_level(graph, F.edge_ids, p, q, "Staged input")
    guaranteed = stage_guaranteed(p, q)
    if not guaranteed:
        logger.warning(f"({p},{q}) -> ({p},{q + 1}) has no stage guarantee; running best-effort")

    H = set(F.edge_ids)
    stage_costs = []
    for stage in range(p):
        _check_stage_precondition(graph, H, p, q, stage)
        family = stage_family(graph, H, p, q, stage)
        verdict = is_uncrossable(family)
        if not verdict:
            if guaranteed:
                raise InvariantViolation(f"Stage {stage} family crosses: {verdict.describe()}")
            raise UncrossableFamilyError(
                f"Stage {stage} of ({p},{q}) -> ({p},{q + 1}) is not uncrossable: {verdict.describe()}",
                pair=verdict.pair,
                stage=stage,
            )
        cover = wgmv_cover(graph, graph.edge_ids - frozenset(H), family, check_uncrossable=False)
        H.update(cover.edge_ids)
        stage_costs.append(cover.cost)
        logger.debug(f"Stage {stage}: {len(family)} cuts, cover cost {cover.cost}")

    _check_stage_precondition(graph, H, p, q, p)
    result = Solution.of(graph, H, stage_costs=stage_costs)
    _check_level(graph, result.edge_ids, p, q + 1, "Staged output")
    logger.info(f"Staged ({p},{q}) -> ({p},{q + 1}): added cost {sum(stage_costs)}")
    return result


def solve_fgc(
    graph: FlexGraph,
    p: int,
    q: int,
    staged: bool = False,
    best_effort: bool = False,
    base_solver: Optional[BaseSolver] = None
) -> Solution:
    """
    Approximate spanning (p,q)-FGC

    Args:
        graph: The multigraph
        p, q: Target levels (p >= 1)
        staged: Route p = 2 through the staged augmentation
        best_effort: Run regimes without a proven guarantee
        base_solver: (graph, p) -> (p,0)-feasible Solution (default: exact base_p0)

    Returns:
        (p,q)-feasible Solution (meta: base_cost, level_costs, factor)
    """
    req = Requirement.spanning(p, q)
    req.validate_for(graph)
    supported = is_supported(p, q, staged)
    if not supported and not best_effort:
        raise UnsupportedRegimeError(
            f"({p},{q})-FGC is open: supported are p = 2 with any q, q <= 3, and q = 4 with even p"
        )

    logger.info("=" * 80)
    logger.info(f"Solving ({p},{q})-FGC on {graph.vertex_count} vertices, {graph.edge_count} edges")
    logger.info("=" * 80)

    base = (base_solver or base_p0)(graph, p)
    _check_level(graph, base.edge_ids, p, 0, "Base solution")

    H = Solution.of(graph, base.edge_ids)
    level_costs = []
    for level in range(q):
        before = H.cost
        if level == 0 or (p == 2 and not staged):
            H = augment_one_level(graph, H, p, level)
        else:
            H = staged_augment(graph, H, p, level)
        level_costs.append(H.cost - before)

    verdict = check_feasible(graph, H.edge_ids, req)
    if not verdict:
        raise InvariantViolation(f"FGC output infeasible: {verdict.describe()}")

    factor = approximation_factor(p, q, staged) if supported else None
    logger.info(f"({p},{q})-FGC solution: {len(H.edge_ids)} edges, cost {H.cost}, factor {factor}")
    return Solution.of(graph, H.edge_ids, base_cost=base.cost, level_costs=level_costs, factor=factor)
