"""
Cut families for augmentation
Violated-cut families, uncrossability and ring-family certificates,
and minimal violated sets
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple

from network.cuts import CutFamily, cut_sort_key, cut_table
from network.feasibility import check_feasible
from network.graph import Cut, FlexGraph, Requirement, Scope
from utils.errors import PreconditionError

logger = logging.getLogger(__name__)

VertexSet = FrozenSet[int]


@dataclass(frozen=True)
class UncrossVerdict:
    """UNCROSSABLE, or CROSSING_PAIR(A, B)"""
    uncrossable: bool
    pair: Optional[Tuple[VertexSet, VertexSet]] = None

    def __bool__(self) -> bool:
        return self.uncrossable

    def describe(self) -> str:
        if self.uncrossable:
            return "UNCROSSABLE"
        a, b = self.pair
        return f"CROSSING_PAIR({_fmt(a)}, {_fmt(b)})"


@dataclass(frozen=True)
class RingVerdict:
    """RING, or a reason with the offending sets"""
    ring: bool
    reason: str = ""
    sets: Tuple[VertexSet, ...] = ()

    def __bool__(self) -> bool:
        return self.ring

    def describe(self) -> str:
        if self.ring:
            return "RING"
        return f"NOT RING: {self.reason} " + ", ".join(_fmt(s) for s in self.sets)


def _fmt(members: Iterable[int]) -> str:
    return "{" + ",".join(map(str, cut_sort_key(members))) + "}"


def _scope_family(
    graph: FlexGraph,
    F: Iterable[int],
    scope: Scope,
    keep,
    provenance: str
) -> CutFamily:
    table = cut_table(graph, scope)
    mask = graph.edge_mask(graph.check_edge_ids(F))
    cuts = []
    for index in range(len(table.cuts)):
        safe, total = table.counts(mask, index)
        if keep(safe, total):
            cuts.append(table.cut(index))
    return CutFamily(tuple(cuts), provenance, graph.vertex_count, scope.symmetric)


def violated_cuts_for_augmentation(graph: FlexGraph, F1: Iterable[int], req: Requirement) -> CutFamily:
    """
    Cuts to cover when raising a (p, q-1)-feasible F1 to (p, q)

    Args:
        graph: The multigraph
        F1: Edge set feasible for (p, q-1)
        req: Target requirement (p, q), q >= 1

    Returns:
        Scope cuts S with |δ_F1(S)| = p+q-1 and fewer than p safe F1-edges
    """
    p, q = req.p, req.q
    if q < 1:
        raise PreconditionError(f"Augmentation needs a target q >= 1, got q = {q}")
    F1 = graph.check_edge_ids(F1)
    verdict = check_feasible(graph, F1, req.with_levels(q=q - 1))
    if not verdict:
        raise PreconditionError(
            f"Starting edge set is infeasible for ({p},{q - 1}): {verdict.describe()}",
            witness=verdict.witness,
        )
    family = _scope_family(
        graph, F1, req.scope,
        lambda safe, total: total == p + q - 1 and safe < p,
        f"augmentation ({p},{q - 1})->({p},{q}) {req.scope}",
    )
    logger.debug(f"Augmentation family ({p},{q - 1})->({p},{q}): {len(family)} cuts")
    return family


def stage_family(graph: FlexGraph, H: Iterable[int], p: int, q: int, stage: int) -> CutFamily:
    """
    Stage family of the staged spanning augmentation from (p,q) to (p,q+1)

    Args:
        graph: The multigraph
        H: Current (p,q)-feasible spanning edge set
        p, q: Current levels
        stage: Safe-edge count i, 0 <= i < p

    Returns:
        Spanning cuts with |δ_H(S)| = p+q and exactly `stage` safe H-edges
    """
    if not 0 <= stage < p:
        raise PreconditionError(f"Stage {stage} outside 0..{p - 1}")
    return _scope_family(
        graph, H, Scope.spanning(),
        lambda safe, total: total == p + q and safe == stage,
        f"augmentation ({p},{q})->({p},{q + 1}) stage {stage}",
    )


def properly_intersect(a: VertexSet, b: VertexSet) -> bool:
    return bool(a & b) and bool(a - b) and bool(b - a)


def _uncrosses(family: CutFamily, a: VertexSet, b: VertexSet, full: VertexSet) -> bool:
    union, inter = a | b, a & b
    if union != full and family.contains(union) and family.contains(inter):
        return True
    return family.contains(a - b) and family.contains(b - a)


def is_uncrossable(family: CutFamily) -> UncrossVerdict:
    """
    Certify or refute uncrossability

    For symmetric families each member pair is also tried with one side
    complemented, which covers every orientation up to complementation.

    Args:
        family: Cut family

    Returns:
        UNCROSSABLE, or the first crossing pair in canonical order
    """
    full = frozenset(range(family.vertex_count))
    sets = [c.members for c in family.cuts]
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            candidates = [b, full - b] if family.symmetric else [b]
            for other in candidates:
                if properly_intersect(a, other) and not _uncrosses(family, a, other, full):
                    logger.debug(f"Crossing pair in '{family.provenance}': {_fmt(a)} x {_fmt(other)}")
                    return UncrossVerdict(False, (a, other))
    return UncrossVerdict(True)


def is_ring_family(family: CutFamily) -> RingVerdict:
    """
    Certify or refute the ring property on the stored members

    Args:
        family: Cut family

    Returns:
        RING; NOT RING with a non-closed properly intersecting pair, or with two minimal sets
    """
    sets = [c.members for c in family.cuts]
    stored = frozenset(sets)
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if properly_intersect(a, b) and not (a | b in stored and a & b in stored):
                return RingVerdict(False, "union/intersection not closed for", (a, b))

    minimal = [s for s in sets if not any(o < s for o in sets)]
    if len(minimal) > 1:
        return RingVerdict(False, "several minimal sets", tuple(minimal[:2]))
    return RingVerdict(True)


def minimal_violated_sets(graph: FlexGraph, family: CutFamily, A: Iterable[int]) -> List[Cut]:
    """
    Inclusion-minimal family sets with empty boundary in A

    Symmetric families contribute both sides of every member.

    Args:
        graph: The multigraph
        family: Cut family
        A: Current edge picks

    Returns:
        Minimal violated sets in canonical order
    """
    picks = [graph.edges[i] for i in graph.check_edge_ids(A)]
    violated = [s for s in family.expanded() if not any(e.crosses(s) for e in picks)]
    minimal = [s for s in violated if not any(o < s for o in violated)]
    return [Cut.of(s, family.vertex_count) for s in minimal]
