"""
Integral flows on the undirected multigraph
Max-flow, successive-shortest-path min-cost flow with potentials, and
decomposition of an integral flow into unit paths
"""
import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from network.graph import Cut, FlexGraph
from utils.errors import InfeasibleInstanceError, StructuralError

logger = logging.getLogger(__name__)

EdgeFlow = Dict[int, int]  # edge id -> signed flow, positive from edge.u to edge.v


@dataclass(frozen=True)
class CapacitatedNet:
    """Edge subset of a FlexGraph with integral capacities; each edge may carry flow either way"""
    base: FlexGraph
    capacities: Dict[int, int] = field(hash=False)

    def __post_init__(self):
        for edge_id, cap in self.capacities.items():
            if not 0 <= edge_id < self.base.edge_count:
                raise StructuralError(f"Unknown edge id {edge_id}")
            if cap < 1:
                raise StructuralError(f"Edge {edge_id} has capacity {cap} < 1")

    @classmethod
    def uniform(cls, graph: FlexGraph, edge_ids: Optional[Iterable[int]] = None) -> "CapacitatedNet":
        ids = graph.edge_ids if edge_ids is None else graph.check_edge_ids(edge_ids)
        return cls(graph, {i: 1 for i in ids})

    @classmethod
    def safety_weighted(
        cls,
        graph: FlexGraph,
        edge_ids: Optional[Iterable[int]] = None,
        safe_capacity: int = 2,
        unsafe_capacity: int = 1
    ) -> "CapacitatedNet":
        """Capacity `safe_capacity` on safe edges and `unsafe_capacity` on unsafe ones"""
        ids = graph.edge_ids if edge_ids is None else graph.check_edge_ids(edge_ids)
        return cls(graph, {
            i: safe_capacity if graph.edges[i].safe else unsafe_capacity for i in ids
        })


@dataclass(frozen=True)
class Path:
    """Simple s-t path as an ordered edge list"""
    edge_ids: Tuple[int, ...]
    vertices: Tuple[int, ...]

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def sink(self) -> int:
        return self.vertices[-1]

    def __contains__(self, edge_id: int) -> bool:
        return edge_id in self.edge_ids


@dataclass(frozen=True)
class FlowResult:
    """Integral flow with its value, per-unit cost and support"""
    value: int
    flow: Dict[int, int] = field(hash=False)
    cost: Fraction = Fraction(0)

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(i for i, f in self.flow.items() if f != 0)


def max_flow(net: CapacitatedNet, s: int, t: int) -> Tuple[int, EdgeFlow]:
    """
    Integral maximum s-t flow

    Args:
        net: Capacitated edge subset
        s, t: Distinct source and sink

    Returns:
        (value, signed per-edge flow)
    """
    if s == t:
        raise StructuralError("max_flow needs s != t")
    graph = net.base
    network = nx.DiGraph()
    network.add_nodes_from(graph.vertices)
    for edge_id, cap in net.capacities.items():
        edge = graph.edges[edge_id]
        for a, b in ((edge.u, edge.v), (edge.v, edge.u)):
            if network.has_edge(a, b):
                network[a][b]["capacity"] += cap
            else:
                network.add_edge(a, b, capacity=cap)

    value, flow_dict = nx.maximum_flow(network, s, t, capacity="capacity")

    # Split the net flow of every vertex pair over its parallel edges, lowest id first
    remaining: Dict[Tuple[int, int], int] = {}
    for a in flow_dict:
        for b, f in flow_dict[a].items():
            if a < b:
                remaining[(a, b)] = f - flow_dict[b].get(a, 0)

    flow: EdgeFlow = {}
    for edge_id in sorted(net.capacities):
        edge = graph.edges[edge_id]
        left = remaining.get((edge.u, edge.v), 0)
        amount = max(-net.capacities[edge_id], min(net.capacities[edge_id], left))
        flow[edge_id] = amount
        remaining[(edge.u, edge.v)] = left - amount

    logger.debug(f"Max flow {s}->{t}: {value}")
    return int(value), flow


class _Residual:
    """Residual graph with paired arcs; arc k and k ^ 1 are mutual reverses"""

    def __init__(self, vertex_count: int):
        self.heads: List[int] = []
        self.caps: List[int] = []
        self.costs: List[Fraction] = []
        self.owner: List[int] = []
        self.sign: List[int] = []
        self.adjacency: List[List[int]] = [[] for _ in range(vertex_count)]

    def add_arc(self, tail: int, head: int, cap: int, cost: Fraction, edge_id: int, sign: int):
        for a, b, c, k, sg in ((tail, head, cap, cost, sign), (head, tail, 0, -cost, -sign)):
            self.adjacency[a].append(len(self.heads))
            self.heads.append(b)
            self.caps.append(c)
            self.costs.append(k)
            self.owner.append(edge_id)
            self.sign.append(sg)


def min_cost_flow(net: CapacitatedNet, s: int, t: int, target_value: int) -> FlowResult:
    """
    Minimum-cost integral s-t flow of exactly target_value

    Successive shortest augmenting paths with Dijkstra on reduced costs.
    Each undirected edge becomes two opposite arcs of its capacity; cost is
    counted per unit of flow.

    Args:
        net: Capacitated edge subset
        s, t: Distinct source and sink
        target_value: Required flow value

    Returns:
        FlowResult with signed per-edge flow and total cost
    """
    if s == t:
        raise StructuralError("min_cost_flow needs s != t")
    graph = net.base
    n = graph.vertex_count
    residual = _Residual(n)
    for edge_id in sorted(net.capacities):
        edge = graph.edges[edge_id]
        cap = net.capacities[edge_id]
        residual.add_arc(edge.u, edge.v, cap, edge.cost, edge_id, +1)
        residual.add_arc(edge.v, edge.u, cap, edge.cost, edge_id, -1)

    potential = [Fraction(0)] * n
    sent = 0
    total_cost = Fraction(0)
    while sent < target_value:
        dist: List[Optional[Fraction]] = [None] * n
        parent: List[Optional[int]] = [None] * n
        dist[s] = Fraction(0)
        heap = [(Fraction(0), s)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for arc in residual.adjacency[x]:
                if residual.caps[arc] <= 0:
                    continue
                y = residual.heads[arc]
                nd = d + residual.costs[arc] + potential[x] - potential[y]
                if dist[y] is None or nd < dist[y]:
                    dist[y] = nd
                    parent[y] = arc
                    heapq.heappush(heap, (nd, y))

        if dist[t] is None:
            reachable = [v for v in range(n) if dist[v] is not None]
            raise InfeasibleInstanceError(
                f"Flow value {target_value} unattainable from {s} to {t}; max is {sent}",
                cut=Cut.canonical(reachable, t, n),
            )

        # Unreachable vertices move by the largest finite distance to keep reduced costs >= 0
        reach_max = max(d for d in dist if d is not None)
        for v in range(n):
            potential[v] += dist[v] if dist[v] is not None else reach_max

        bottleneck = target_value - sent
        v = t
        while v != s:
            arc = parent[v]
            bottleneck = min(bottleneck, residual.caps[arc])
            v = residual.heads[arc ^ 1]
        v = t
        while v != s:
            arc = parent[v]
            residual.caps[arc] -= bottleneck
            residual.caps[arc ^ 1] += bottleneck
            total_cost += bottleneck * residual.costs[arc]
            v = residual.heads[arc ^ 1]
        sent += bottleneck

    flow: EdgeFlow = {i: 0 for i in net.capacities}
    for arc in range(0, len(residual.heads), 2):
        # Forward arcs sit at even positions; the reverse arc's capacity is the flow pushed
        flow[residual.owner[arc]] += residual.sign[arc] * residual.caps[arc ^ 1]

    logger.debug(f"Min-cost flow {s}->{t} value {target_value}: cost {total_cost}")
    return FlowResult(target_value, flow, total_cost)


def _check_conservation(graph: FlexGraph, flow: EdgeFlow, s: int, t: int) -> int:
    excess = [0] * graph.vertex_count
    for edge_id, f in flow.items():
        edge = graph.edges[edge_id]
        excess[edge.u] -= f
        excess[edge.v] += f
    value = -excess[s]
    for v in graph.vertices:
        if v not in (s, t) and excess[v] != 0:
            raise StructuralError(f"Flow conservation violated at vertex {v} (excess {excess[v]})")
    if excess[t] != value:
        raise StructuralError("Flow leaving s differs from flow entering t")
    return value


def decompose(graph: FlexGraph, flow: EdgeFlow, s: int, t: int) -> List[Path]:
    """
    Decompose an integral s-t flow into unit paths

    Flow cycles are cancelled first; paths are then extracted depth-first,
    always leaving a vertex by the lowest edge id with remaining flow.

    Args:
        graph: The multigraph
        flow: Signed per-edge integral flow
        s, t: Source and sink

    Returns:
        Exactly `value` simple paths
    """
    value = _check_conservation(graph, flow, s, t)
    if value < 0:
        raise StructuralError(f"Flow runs from {t} to {s}")

    arcs = nx.MultiDiGraph()
    arcs.add_nodes_from(graph.vertices)
    for edge_id in sorted(flow):
        f = flow[edge_id]
        if f == 0:
            continue
        edge = graph.edges[edge_id]
        tail, head = (edge.u, edge.v) if f > 0 else (edge.v, edge.u)
        arcs.add_edge(tail, head, key=edge_id, units=abs(f))

    while True:
        try:
            cycle = nx.find_cycle(arcs)
        except nx.NetworkXNoCycle:
            break
        units = min(arcs[a][b][k]["units"] for a, b, k in cycle)
        for a, b, k in cycle:
            arcs[a][b][k]["units"] -= units
            if arcs[a][b][k]["units"] == 0:
                arcs.remove_edge(a, b, key=k)
        logger.debug(f"Cancelled flow cycle of {len(cycle)} arcs carrying {units}")

    paths = []
    for _ in range(value):
        vertex = s
        edges: List[int] = []
        vertices = [s]
        while vertex != t:
            options = sorted((k, b) for _, b, k in arcs.out_edges(vertex, keys=True))
            if not options:
                raise StructuralError(f"Flow path stuck at vertex {vertex}")
            key, head = options[0]
            arcs[vertex][head][key]["units"] -= 1
            if arcs[vertex][head][key]["units"] == 0:
                arcs.remove_edge(vertex, head, key=key)
            edges.append(key)
            vertices.append(head)
            vertex = head
        paths.append(Path(tuple(edges), tuple(vertices)))
    return paths
