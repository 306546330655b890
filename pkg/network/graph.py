"""
Flexible network graph model
Undirected multigraph with safe/unsafe edges, exact rational costs,
canonical cuts, requirements and solutions
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from utils.errors import PreconditionError, StructuralError

logger = logging.getLogger(__name__)

CostLike = Union[int, str, Fraction]


class Safety(str, Enum):
    """Edge fault class: safe edges never fail, unsafe edges may"""
    SAFE = "S"
    UNSAFE = "U"

    @classmethod
    def parse(cls, tag: str) -> "Safety":
        """Parse an S/U tag, case-insensitively"""
        try:
            return cls(tag.strip().upper())
        except ValueError:
            raise StructuralError(f"Unknown safety tag: {tag!r}")


def to_cost(value: CostLike) -> Fraction:
    """Convert an int, decimal string or Fraction into an exact nonnegative cost"""
    if isinstance(value, float):
        raise StructuralError("Costs must be exact; pass a decimal string instead of a float")
    try:
        cost = Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise StructuralError(f"Invalid cost: {value!r}")
    if cost < 0:
        raise StructuralError(f"Negative cost: {value!r}")
    return cost


@dataclass(frozen=True)
class EdgeRecord:
    """One edge of the multigraph; endpoints are stored with u < v"""
    u: int
    v: int
    cost: Fraction
    safety: Safety

    def __post_init__(self):
        if self.u == self.v:
            raise StructuralError(f"Self-loop at vertex {self.u}")
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
        object.__setattr__(self, "cost", to_cost(self.cost))
        if not isinstance(self.safety, Safety):
            object.__setattr__(self, "safety", Safety.parse(str(self.safety)))

    @property
    def safe(self) -> bool:
        return self.safety is Safety.SAFE

    @property
    def endpoints(self) -> Tuple[int, int]:
        return (self.u, self.v)

    def other(self, vertex: int) -> int:
        return self.v if vertex == self.u else self.u

    def crosses(self, members: FrozenSet[int]) -> bool:
        return (self.u in members) != (self.v in members)

    def sort_key(self) -> Tuple[int, int, str, Fraction]:
        return (self.u, self.v, self.safety.value, self.cost)


@dataclass(frozen=True)
class FlexGraph:
    """
    Undirected multigraph G = (V, E) with V = {0..n-1}
    Edge ids are the positions in `edges` and never change
    """
    vertex_count: int
    edges: Tuple[EdgeRecord, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise StructuralError("A graph needs at least one vertex")
        edges = tuple(self.edges)
        object.__setattr__(self, "edges", edges)
        for edge_id, edge in enumerate(edges):
            if not (0 <= edge.u < self.vertex_count and 0 <= edge.v < self.vertex_count):
                raise StructuralError(
                    f"Edge {edge_id} ({edge.u},{edge.v}) has an endpoint outside 0..{self.vertex_count - 1}"
                )

    @classmethod
    def build(
        cls,
        vertex_count: int,
        edges: Iterable[Tuple[int, int, CostLike, Union[Safety, str]]]
    ) -> "FlexGraph":
        """
        Build a graph from (u, v, cost, safety) tuples

        Args:
            vertex_count: Number of vertices
            edges: Iterable of (u, v, cost, safety) with safety a Safety or "S"/"U"

        Returns:
            FlexGraph with edge ids in input order
        """
        records = []
        for u, v, cost, safety in edges:
            if not isinstance(safety, Safety):
                safety = Safety.parse(safety)
            records.append(EdgeRecord(u, v, to_cost(cost), safety))
        return cls(vertex_count, tuple(records))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @property
    def edge_ids(self) -> FrozenSet[int]:
        return frozenset(range(len(self.edges)))

    @property
    def safe_ids(self) -> FrozenSet[int]:
        return frozenset(i for i, e in enumerate(self.edges) if e.safe)

    @property
    def unsafe_ids(self) -> FrozenSet[int]:
        return frozenset(i for i, e in enumerate(self.edges) if not e.safe)

    def edge(self, edge_id: int) -> EdgeRecord:
        return self.edges[edge_id]

    def cost_of(self, edge_ids: Iterable[int]) -> Fraction:
        return sum((self.edges[i].cost for i in edge_ids), Fraction(0))

    def check_edge_ids(self, edge_ids: Iterable[int]) -> FrozenSet[int]:
        """Validate an edge-id set against this graph"""
        ids = frozenset(edge_ids)
        bad = [i for i in ids if not 0 <= i < len(self.edges)]
        if bad:
            raise StructuralError(f"Unknown edge ids: {sorted(bad)}")
        return ids

    def check_vertices(self, vertices: Iterable[int]) -> FrozenSet[int]:
        """Validate a vertex set against this graph"""
        members = frozenset(vertices)
        bad = [v for v in members if not 0 <= v < self.vertex_count]
        if bad:
            raise StructuralError(f"Unknown vertex ids: {sorted(bad)}")
        return members

    def canonical(self) -> "FlexGraph":
        """Same multigraph with edges sorted by (endpoints, safety, cost)"""
        return FlexGraph(self.vertex_count, tuple(sorted(self.edges, key=EdgeRecord.sort_key)))

    def edge_mask(self, edge_ids: Iterable[int]) -> int:
        """Bitmask of an edge-id set (bit i = edge i)"""
        mask = 0
        for i in edge_ids:
            mask |= 1 << i
        return mask


class ScopeKind(str, Enum):
    PAIR = "pair"
    TERMINALS = "terminals"
    SPANNING = "spanning"


@dataclass(frozen=True)
class Scope:
    """Which vertex pairs must be flex-connected"""
    kind: ScopeKind
    vertices: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind is ScopeKind.PAIR:
            if len(self.vertices) != 2 or self.vertices[0] == self.vertices[1]:
                raise StructuralError("Pair scope needs two distinct vertices (s, t)")
        elif self.kind is ScopeKind.TERMINALS:
            terminals = tuple(sorted(set(self.vertices)))
            if len(terminals) < 2:
                raise StructuralError("Terminal scope needs at least two distinct terminals")
            object.__setattr__(self, "vertices", terminals)
        elif self.vertices:
            raise StructuralError("Spanning scope takes no vertices")

    @classmethod
    def pair(cls, s: int, t: int) -> "Scope":
        return cls(ScopeKind.PAIR, (s, t))

    @classmethod
    def terminals(cls, terminals: Iterable[int]) -> "Scope":
        return cls(ScopeKind.TERMINALS, tuple(terminals))

    @classmethod
    def spanning(cls) -> "Scope":
        return cls(ScopeKind.SPANNING)

    @property
    def symmetric(self) -> bool:
        """Pair families are stored s-side only; the other scopes identify S with V - S"""
        return self.kind is not ScopeKind.PAIR

    def anchor(self, vertex_count: int) -> int:
        """Vertex excluded from every canonical cut of this scope"""
        if self.kind is ScopeKind.PAIR:
            return self.vertices[1]
        if self.kind is ScopeKind.TERMINALS:
            return self.vertices[0]
        return 0

    def separates(self, members: FrozenSet[int]) -> bool:
        """Whether the vertex set S separates some pair of this scope"""
        if self.kind is ScopeKind.PAIR:
            s, t = self.vertices
            return (s in members) != (t in members)
        if self.kind is ScopeKind.TERMINALS:
            inside = sum(1 for v in self.vertices if v in members)
            return 0 < inside < len(self.vertices)
        return True

    def validate(self, vertex_count: int) -> None:
        for v in self.vertices:
            if not 0 <= v < vertex_count:
                raise StructuralError(f"Scope vertex {v} outside 0..{vertex_count - 1}")
        if self.kind is ScopeKind.SPANNING and vertex_count < 2:
            raise StructuralError("Spanning scope needs at least two vertices")

    def __str__(self) -> str:
        if self.kind is ScopeKind.SPANNING:
            return "spanning"
        return f"{self.kind.value}({','.join(map(str, self.vertices))})"


@dataclass(frozen=True)
class Requirement:
    """(p, q) demand: every scope-separating cut needs p safe edges or p+q edges in total"""
    p: int
    q: int
    scope: Scope

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise StructuralError(f"p and q must be nonnegative, got ({self.p},{self.q})")

    @classmethod
    def pair(cls, p: int, q: int, s: int, t: int) -> "Requirement":
        return cls(p, q, Scope.pair(s, t))

    @classmethod
    def terminals(cls, p: int, q: int, terminals: Iterable[int]) -> "Requirement":
        return cls(p, q, Scope.terminals(terminals))

    @classmethod
    def spanning(cls, p: int, q: int) -> "Requirement":
        return cls(p, q, Scope.spanning())

    def with_levels(self, p: Optional[int] = None, q: Optional[int] = None) -> "Requirement":
        return Requirement(self.p if p is None else p, self.q if q is None else q, self.scope)

    def validate_for(self, graph: FlexGraph, solver: bool = True) -> None:
        self.scope.validate(graph.vertex_count)
        if solver and self.p < 1:
            raise PreconditionError(f"Solvers need p >= 1, got p = {self.p}")

    def satisfied_by(self, safe: int, total: int) -> bool:
        return safe >= self.p or total >= self.p + self.q

    def __str__(self) -> str:
        return f"({self.p},{self.q}) {self.scope}"


@dataclass(frozen=True)
class Cut:
    """
    Vertex set S with a vertex guaranteed outside it
    Canonical cuts of a scope store the side not containing the scope anchor
    """
    members: FrozenSet[int]
    canonical_anchor: int

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise StructuralError("A cut needs a nonempty member set")
        if self.canonical_anchor in members:
            raise StructuralError(f"Anchor {self.canonical_anchor} lies inside the cut")

    @classmethod
    def canonical(cls, vertices: Iterable[int], anchor: int, vertex_count: int) -> "Cut":
        """Canonical form: the side of {S, V-S} not containing `anchor`"""
        side = frozenset(vertices)
        if anchor in side:
            side = frozenset(range(vertex_count)) - side
        if not side or len(side) >= vertex_count:
            raise StructuralError("A cut must be a nonempty proper vertex subset")
        return cls(side, anchor)

    @classmethod
    def of(cls, vertices: Iterable[int], vertex_count: int) -> "Cut":
        """Cut exactly as given, anchored at the smallest outside vertex"""
        side = frozenset(vertices)
        outside = [v for v in range(vertex_count) if v not in side]
        if not side or not outside:
            raise StructuralError("A cut must be a nonempty proper vertex subset")
        return cls(side, outside[0])

    @property
    def key(self) -> Tuple[int, ...]:
        return tuple(sorted(self.members))

    def complement(self, vertex_count: int) -> FrozenSet[int]:
        return frozenset(range(vertex_count)) - self.members

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.key)) + "}"


@dataclass(frozen=True)
class Boundary:
    """δ_F(S) with its safe/unsafe split"""
    edge_ids: FrozenSet[int]
    safe: int
    unsafe: int

    @property
    def total(self) -> int:
        return self.safe + self.unsafe


def boundary(
    graph: FlexGraph,
    F: Iterable[int],
    S: Union[Cut, Iterable[int]]
) -> Boundary:
    """
    Edges of F with exactly one endpoint in S

    Args:
        graph: The multigraph
        F: Edge-id set
        S: A Cut or any vertex set (the empty set and V give an empty boundary)

    Returns:
        Boundary with edge ids and safe/unsafe counts
    """
    members = S.members if isinstance(S, Cut) else frozenset(S)
    graph.check_vertices(members)
    ids = frozenset(i for i in graph.check_edge_ids(F) if graph.edges[i].crosses(members))
    safe = sum(1 for i in ids if graph.edges[i].safe)
    return Boundary(ids, safe, len(ids) - safe)


@dataclass(frozen=True)
class Solution:
    """Edge set with its exact cost; `meta` carries solver diagnostics"""
    edge_ids: FrozenSet[int]
    cost: Fraction
    meta: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def of(cls, graph: FlexGraph, edge_ids: Iterable[int], **meta: Any) -> "Solution":
        ids = graph.check_edge_ids(edge_ids)
        return cls(ids, graph.cost_of(ids), dict(meta))

    def union(self, graph: FlexGraph, other: Iterable[int], **meta: Any) -> "Solution":
        merged = dict(self.meta)
        merged.update(meta)
        return Solution.of(graph, self.edge_ids | frozenset(other), **merged)

    def check_cost(self, graph: FlexGraph) -> bool:
        return graph.cost_of(self.edge_ids) == self.cost

    def to_dict(self) -> Dict[str, Any]:
        return {
            "edge_ids": sorted(self.edge_ids),
            "cost": str(self.cost),
            "cost_float": float(self.cost),
        }

    def __repr__(self) -> str:
        return f"Solution(edges={sorted(self.edge_ids)}, cost={self.cost})"


@dataclass(frozen=True)
class Contraction:
    """Result of identifying a vertex set; maps new edge ids back to original ones"""
    graph: FlexGraph
    edge_map: Tuple[int, ...]
    vertex_map: Dict[int, int] = field(hash=False)

    def lift(self, edge_ids: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.edge_map[i] for i in edge_ids)


def contract(graph: FlexGraph, merge_set: Iterable[int], into: int) -> Contraction:
    """
    Identify all vertices of merge_set with `into`

    Self-loops created by the merge are dropped, parallel edges kept.
    Surviving vertices are renumbered densely in original order.

    Args:
        graph: The multigraph
        merge_set: Vertices to identify (must contain `into`)
        into: Representative vertex

    Returns:
        Contraction with the new graph, new->original edge map and original->new vertex map
    """
    merged = graph.check_vertices(merge_set)
    if into not in merged:
        raise StructuralError(f"Representative {into} is not in the merge set")

    survivors = [v for v in graph.vertices if v not in merged or v == into]
    renumber = {v: i for i, v in enumerate(survivors)}
    vertex_map = {v: renumber[into] if v in merged else renumber[v] for v in graph.vertices}

    records: List[EdgeRecord] = []
    edge_map: List[int] = []
    for edge_id, edge in enumerate(graph.edges):
        u, v = vertex_map[edge.u], vertex_map[edge.v]
        if u == v:
            continue
        records.append(EdgeRecord(u, v, edge.cost, edge.safety))
        edge_map.append(edge_id)

    logger.debug(
        f"Contracted {len(merged)} vertices: {graph.vertex_count}->{len(survivors)} vertices, "
        f"{graph.edge_count}->{len(records)} edges"
    )
    return Contraction(FlexGraph(len(survivors), tuple(records)), tuple(edge_map), vertex_map)
