"""
Cut enumeration
Exhaustive canonical cut lists per scope, cached boundary bitmask tables,
cut families and weighted minimum cuts
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

import networkx as nx

from config.settings import settings
from network.graph import Cut, FlexGraph, Scope, ScopeKind
from utils.errors import CapacityError, PreconditionError

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]


def cut_sort_key(members: Iterable[int]) -> Tuple[int, ...]:
    """Lexicographic order on sorted member tuples"""
    return tuple(sorted(members))


@dataclass(frozen=True)
class CutFamily:
    """
    Explicit list of vertex sets to cover
    `symmetric` families identify S with V - S (spanning and terminal scopes)
    """
    cuts: Tuple[Cut, ...]
    provenance: str
    vertex_count: int
    symmetric: bool = False

    @classmethod
    def build(
        cls,
        cuts: Iterable[Union[Cut, Iterable[int]]],
        provenance: str,
        vertex_count: int,
        symmetric: bool = False,
        anchor: Optional[int] = None
    ) -> "CutFamily":
        """
        Deduplicate and sort cuts into a family

        Args:
            cuts: Cut objects or raw vertex sets
            provenance: Origin tag
            vertex_count: |V|
            symmetric: Whether S and V - S are the same member
            anchor: Canonicalisation anchor for symmetric families (default: vertex 0)
        """
        seen: Dict[FrozenSet[int], Cut] = {}
        for item in cuts:
            members = item.members if isinstance(item, Cut) else frozenset(item)
            if symmetric:
                cut = Cut.canonical(members, 0 if anchor is None else anchor, vertex_count)
            elif isinstance(item, Cut):
                cut = item
            else:
                cut = Cut.of(members, vertex_count)
            seen.setdefault(cut.members, cut)
        ordered = tuple(sorted(seen.values(), key=lambda c: c.key))
        return cls(ordered, provenance, vertex_count, symmetric)

    @property
    def member_sets(self) -> FrozenSet[FrozenSet[int]]:
        return frozenset(c.members for c in self.cuts)

    def contains(self, vertices: Iterable[int]) -> bool:
        """Membership of an arbitrary vertex set, honouring complement identification"""
        members = frozenset(vertices)
        sets = self.member_sets
        if members in sets:
            return True
        if self.symmetric:
            return frozenset(range(self.vertex_count)) - members in sets
        return False

    def expanded(self) -> List[FrozenSet[int]]:
        """All vertex sets the family requires covered (both sides when symmetric)"""
        full = frozenset(range(self.vertex_count))
        sets = [c.members for c in self.cuts]
        if self.symmetric:
            sets += [full - c.members for c in self.cuts]
        return sorted(set(sets), key=cut_sort_key)

    def union(self, other: "CutFamily", provenance: Optional[str] = None) -> "CutFamily":
        return CutFamily.build(
            list(self.cuts) + list(other.cuts),
            provenance or f"{self.provenance} + {other.provenance}",
            self.vertex_count,
            self.symmetric and other.symmetric,
        )

    def __len__(self) -> int:
        return len(self.cuts)

    def __iter__(self) -> Iterator[Cut]:
        return iter(self.cuts)

    def __bool__(self) -> bool:
        return bool(self.cuts)

    def keys(self) -> List[Tuple[int, ...]]:
        return [c.key for c in self.cuts]


@dataclass(frozen=True)
class CutTable:
    """
    Every canonical cut of a scope with its boundary as edge bitmasks
    Bit i of a mask is set when edge i crosses the cut
    """
    scope: Scope
    vertex_count: int
    cuts: Tuple[FrozenSet[int], ...]
    all_masks: Tuple[int, ...]
    safe_masks: Tuple[int, ...]

    def first_violation(self, edge_mask: int, p: int, q: int) -> Optional[int]:
        """Index of the lexicographically first cut failing (p,q) under edge_mask, or None"""
        need_total = p + q
        for index, (all_mask, safe_mask) in enumerate(zip(self.all_masks, self.safe_masks)):
            if (edge_mask & safe_mask).bit_count() < p and (edge_mask & all_mask).bit_count() < need_total:
                return index
        return None

    def counts(self, edge_mask: int, index: int) -> Tuple[int, int]:
        """(safe, total) boundary counts of cut `index` under edge_mask"""
        return (
            (edge_mask & self.safe_masks[index]).bit_count(),
            (edge_mask & self.all_masks[index]).bit_count(),
        )

    def cut(self, index: int) -> Cut:
        return Cut(self.cuts[index], self.scope.anchor(self.vertex_count))


def _scope_subsets(vertex_count: int, scope: Scope) -> List[FrozenSet[int]]:
    anchor = scope.anchor(vertex_count)
    if scope.kind is ScopeKind.PAIR:
        s = scope.vertices[0]
        free = [v for v in range(vertex_count) if v not in scope.vertices]
        fixed = frozenset([s])
        start = 0
    else:
        free = [v for v in range(vertex_count) if v != anchor]
        fixed = frozenset()
        start = 1

    subsets = []
    for mask in range(start, 1 << len(free)):
        members = fixed | frozenset(v for bit, v in enumerate(free) if mask >> bit & 1)
        if scope.separates(members):
            subsets.append(members)
    subsets.sort(key=cut_sort_key)
    return subsets


def _check_bound(vertex_count: int, bound: Optional[int]) -> None:
    bound = settings.cut_enumeration_bound if bound is None else bound
    if vertex_count > bound:
        raise CapacityError("vertex_count", vertex_count, bound)


def enumerate_cuts(graph: FlexGraph, scope: Scope, bound: Optional[int] = None) -> CutFamily:
    """
    All canonical cuts separating the scope, in lexicographic order

    Args:
        graph: The multigraph
        scope: Pair, terminals or spanning scope
        bound: Vertex bound (defaults to settings.cut_enumeration_bound)

    Returns:
        CutFamily of canonical cuts
    """
    scope.validate(graph.vertex_count)
    _check_bound(graph.vertex_count, bound)
    anchor = scope.anchor(graph.vertex_count)
    cuts = [Cut(members, anchor) for members in _scope_subsets(graph.vertex_count, scope)]
    return CutFamily(tuple(cuts), f"all cuts {scope}", graph.vertex_count, scope.symmetric)


@lru_cache(maxsize=128)
def cut_table(graph: FlexGraph, scope: Scope) -> CutTable:
    """
    Cached boundary bitmasks for every canonical cut of the scope

    Args:
        graph: The multigraph
        scope: Pair, terminals or spanning scope

    Returns:
        CutTable in lexicographic cut order
    """
    scope.validate(graph.vertex_count)
    _check_bound(graph.vertex_count, None)
    subsets = _scope_subsets(graph.vertex_count, scope)

    all_masks = []
    safe_masks = []
    for members in subsets:
        vertex_mask = 0
        for v in members:
            vertex_mask |= 1 << v
        all_mask = 0
        safe_mask = 0
        for edge_id, edge in enumerate(graph.edges):
            if (vertex_mask >> edge.u ^ vertex_mask >> edge.v) & 1:
                all_mask |= 1 << edge_id
                if edge.safe:
                    safe_mask |= 1 << edge_id
        all_masks.append(all_mask)
        safe_masks.append(safe_mask)

    logger.debug(f"Built cut table for {scope}: {len(subsets)} cuts over {graph.edge_count} edges")
    return CutTable(scope, graph.vertex_count, tuple(subsets), tuple(all_masks), tuple(safe_masks))


def _scope_pairs(vertex_count: int, scope: Scope) -> List[Tuple[int, int]]:
    if scope.kind is ScopeKind.PAIR:
        return [tuple(scope.vertices)]
    anchor = scope.anchor(vertex_count)
    others = scope.vertices if scope.kind is ScopeKind.TERMINALS else range(vertex_count)
    return [(anchor, v) for v in others if v != anchor]


def weighted_min_cut(
    graph: FlexGraph,
    weights: Dict[int, Number],
    scope: Scope
) -> Tuple[Number, Cut]:
    """
    Minimum-weight scope-separating cut via max-flow

    Pair scope uses one s-t flow; terminal and spanning scopes run one flow
    from the anchor to every other scope vertex.

    Args:
        graph: The multigraph
        weights: Edge id -> nonnegative weight, defined on every edge
        scope: Pair, terminals or spanning scope

    Returns:
        (value, canonical Cut); ties keep the first pair in scope order
    """
    scope.validate(graph.vertex_count)
    missing = [i for i in range(graph.edge_count) if i not in weights]
    if missing:
        raise PreconditionError(f"Weights missing for edges {missing[:5]}")

    network = nx.DiGraph()
    network.add_nodes_from(graph.vertices)
    for edge_id, edge in enumerate(graph.edges):
        w = weights[edge_id]
        for a, b in ((edge.u, edge.v), (edge.v, edge.u)):
            if network.has_edge(a, b):
                network[a][b]["capacity"] += w
            else:
                network.add_edge(a, b, capacity=w)

    anchor = scope.anchor(graph.vertex_count)
    best_value = None
    best_side = None
    for source, sink in _scope_pairs(graph.vertex_count, scope):
        value, (reachable, _) = nx.minimum_cut(network, source, sink, capacity="capacity")
        if best_value is None or value < best_value:
            best_value, best_side = value, reachable

    if best_value is None:
        raise PreconditionError(f"Scope {scope} has no separating cut")
    return best_value, Cut.canonical(best_side, anchor, graph.vertex_count)
