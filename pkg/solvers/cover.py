"""
Cut-family covering
Primal-dual 2-approximation for uncrossable families (uniform dual growth on
minimal violated sets, reverse delete) and an exact branch-and-bound cover
for ring families
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from network.cuts import CutFamily
from network.families import is_ring_family, is_uncrossable, minimal_violated_sets
from network.graph import Cut, FlexGraph, Solution
from utils.errors import (
    InvariantViolation,
    NotRingFamilyError,
    UncoverableCutError,
    UncrossableFamilyError,
)

logger = logging.getLogger(__name__)

VertexSet = FrozenSet[int]


@dataclass
class DualState:
    """Dual values of the growth phase; loads never exceed edge costs"""
    duals: Dict[VertexSet, Fraction] = field(default_factory=dict)
    tight_edges: List[int] = field(default_factory=list)
    time: Fraction = Fraction(0)
    events: int = 0

    @property
    def total(self) -> Fraction:
        return sum(self.duals.values(), Fraction(0))


def _crossing(graph: FlexGraph, candidates: Iterable[int], members: VertexSet) -> List[int]:
    return [e for e in candidates if graph.edges[e].crosses(members)]


def _require_coverable(graph: FlexGraph, candidates: FrozenSet[int], family: CutFamily) -> None:
    for cut in family.cuts:
        if not _crossing(graph, candidates, cut.members):
            raise UncoverableCutError(
                f"No candidate edge crosses {cut} in '{family.provenance}'", cut=cut
            )


def covers(graph: FlexGraph, edge_ids: Iterable[int], family: CutFamily) -> bool:
    """Whether every family cut has a nonempty boundary in edge_ids"""
    edges = [graph.edges[i] for i in edge_ids]
    return all(any(e.crosses(cut.members) for e in edges) for cut in family.cuts)


def wgmv_cover(
    graph: FlexGraph,
    candidates: Iterable[int],
    family: CutFamily,
    check_uncrossable: bool = True
) -> Solution:
    """
    Primal-dual cover of an uncrossable family

    Raises the duals of all minimal violated sets uniformly until candidate
    edges go tight, adds every tight edge (lowest id first), repeats until
    nothing is violated, then deletes redundant picks in reverse order.

    Args:
        graph: The multigraph
        candidates: Edges that may be added
        family: Uncrossable cut family
        check_uncrossable: Verify uncrossability first

    Returns:
        Solution with meta["dual_state"] (DualState) and meta["dual_total"]
    """
    candidates = graph.check_edge_ids(candidates)
    state = DualState()
    if not family:
        return Solution.of(graph, (), dual_state=state, dual_total=Fraction(0))

    if check_uncrossable:
        verdict = is_uncrossable(family)
        if not verdict:
            raise UncrossableFamilyError(
                f"Family '{family.provenance}' is not uncrossable: {verdict.describe()}",
                pair=verdict.pair,
            )
    _require_coverable(graph, candidates, family)

    crossing_cache: Dict[VertexSet, List[int]] = {}
    load: Dict[int, Fraction] = {e: Fraction(0) for e in candidates}
    picks: List[int] = []
    picked = set()

    while True:
        minimal = minimal_violated_sets(graph, family, picks)
        if not minimal:
            break

        rate: Dict[int, int] = {}
        for cut in minimal:
            crossing = crossing_cache.setdefault(
                cut.members, _crossing(graph, sorted(candidates), cut.members)
            )
            if not crossing:
                raise UncoverableCutError(f"No candidate edge crosses {cut}", cut=cut)
            for e in crossing:
                rate[e] = rate.get(e, 0) + 1

        epsilon = min((graph.edges[e].cost - load[e]) / r for e, r in rate.items())
        for cut in minimal:
            state.duals[cut.members] = state.duals.get(cut.members, Fraction(0)) + epsilon
        for e, r in rate.items():
            load[e] += epsilon * r
        state.time += epsilon
        state.events += 1

        for e, cost in ((e, graph.edges[e].cost) for e in candidates):
            if load[e] > cost:
                raise InvariantViolation(f"Dual load {load[e]} exceeds cost {cost} on edge {e}")

        tight = sorted(e for e in rate if load[e] == graph.edges[e].cost and e not in picked)
        picks.extend(tight)
        picked.update(tight)
        state.tight_edges.extend(tight)
        logger.debug(
            f"Dual event {state.events}: {len(minimal)} minimal sets, epsilon {epsilon}, tight {tight}"
        )

    kept = list(picks)
    for e in reversed(picks):
        trial = [x for x in kept if x != e]
        if covers(graph, trial, family):
            kept = trial

    solution = Solution.of(graph, kept, dual_state=state, dual_total=state.total)
    if solution.cost > 2 * state.total:
        raise InvariantViolation(
            f"Cover cost {solution.cost} exceeds twice the dual total {state.total}"
        )
    logger.info(
        f"Covered '{family.provenance}' ({len(family)} cuts) with {len(kept)} edges, "
        f"cost {solution.cost}, dual {state.total}"
    )
    return solution


def _exact_hitting_set(
    graph: FlexGraph,
    candidates: List[int],
    cut_masks: List[int]
) -> Tuple[Fraction, Tuple[int, ...]]:
    """Minimum-cost candidate subset hitting every mask (bit k = candidates[k])"""
    costs = [graph.edges[e].cost for e in candidates]
    order = sorted(range(len(candidates)), key=lambda k: (costs[k], candidates[k]))
    best: List[Optional[Tuple[Fraction, Tuple[int, ...]]]] = [None]

    def search(chosen: int, cost: Fraction, banned: int) -> None:
        tightest = None
        for mask in cut_masks:
            if mask & chosen:
                continue
            available = mask & ~banned
            if tightest is None or available.bit_count() < tightest.bit_count():
                tightest = available
                if not available:
                    return
        if tightest is None:
            ids = tuple(sorted(candidates[k] for k in range(len(candidates)) if chosen >> k & 1))
            if best[0] is None or (cost, ids) < best[0]:
                best[0] = (cost, ids)
            return

        options = [k for k in order if tightest >> k & 1]
        if best[0] is not None and cost + costs[options[0]] > best[0][0]:
            return
        for k in options:
            if best[0] is not None and cost + costs[k] > best[0][0]:
                break
            search(chosen | 1 << k, cost + costs[k], banned)
            banned |= 1 << k

    search(0, Fraction(0), 0)
    return best[0]


def ring_cover_exact(graph: FlexGraph, candidates: Iterable[int], family: CutFamily) -> Solution:
    """
    Minimum-cost cover of a ring family

    Branch-and-bound on the cut with the fewest remaining candidate edges,
    branching on which of its edges is the cheapest one taken.

    Args:
        graph: The multigraph
        candidates: Edges that may be added
        family: Ring family

    Returns:
        Optimal Solution (ties broken by lexicographic edge-id tuple)
    """
    verdict = is_ring_family(family)
    if not verdict:
        raise NotRingFamilyError(f"Family '{family.provenance}' is not a ring family: {verdict.describe()}")
    candidates = sorted(graph.check_edge_ids(candidates))
    if not family:
        return Solution.of(graph, ())
    _require_coverable(graph, frozenset(candidates), family)

    cut_masks = []
    for cut in family.cuts:
        mask = 0
        for k, e in enumerate(candidates):
            if graph.edges[e].crosses(cut.members):
                mask |= 1 << k
        cut_masks.append(mask)

    cost, ids = _exact_hitting_set(graph, candidates, cut_masks)
    logger.info(f"Exact ring cover of '{family.provenance}' ({len(family)} cuts): {list(ids)}, cost {cost}")
    return Solution.of(graph, ids)
