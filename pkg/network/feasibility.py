"""
Feasibility checking for (p,q)-flex-connectivity
Two independent pair checks (failure-set enumeration with max-flow, and the
cut condition) plus the scope-wide checker returning a witness cut
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

import networkx as nx

from network.cuts import cut_table
from network.graph import Cut, FlexGraph, Requirement, Scope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeasibilityVerdict:
    """FEASIBLE, or INFEASIBLE with a violated witness cut and its boundary counts"""
    feasible: bool
    witness: Optional[Cut] = None
    safe: int = 0
    total: int = 0

    def __bool__(self) -> bool:
        return self.feasible

    def describe(self) -> str:
        if self.feasible:
            return "FEASIBLE"
        return f"INFEASIBLE witness {self.witness} (safe={self.safe}, total={self.total})"


def _edge_connectivity(graph: FlexGraph, edge_ids: Iterable[int], u: int, v: int) -> int:
    network = nx.DiGraph()
    network.add_nodes_from(graph.vertices)
    for edge_id in edge_ids:
        edge = graph.edges[edge_id]
        for a, b in ((edge.u, edge.v), (edge.v, edge.u)):
            if network.has_edge(a, b):
                network[a][b]["capacity"] += 1
            else:
                network.add_edge(a, b, capacity=1)
    return nx.maximum_flow_value(network, u, v, capacity="capacity")


def is_flex_connected_by_failures(
    graph: FlexGraph,
    F: Iterable[int],
    u: int,
    v: int,
    p: int,
    q: int
) -> bool:
    """
    (p,q)-flex-connectivity by brute force over failure sets

    True iff for every B ⊆ F∩U with |B| <= q, the u-v edge connectivity of
    (V, F - B) is at least p. Removing more edges never raises connectivity,
    so only failure sets of size min(q, |F∩U|) are tried.
    """
    F = graph.check_edge_ids(F)
    unsafe = sorted(i for i in F if not graph.edges[i].safe)
    size = min(q, len(unsafe))
    for failed in combinations(unsafe, size):
        if _edge_connectivity(graph, F.difference(failed), u, v) < p:
            logger.debug(f"Failure set {failed} drops {u}-{v} connectivity below {p}")
            return False
    return True


def is_flex_connected_by_cuts(
    graph: FlexGraph,
    F: Iterable[int],
    u: int,
    v: int,
    p: int,
    q: int
) -> bool:
    """(p,q)-flex-connectivity via the cut condition over all u-v cuts"""
    table = cut_table(graph, Scope.pair(u, v))
    return table.first_violation(graph.edge_mask(graph.check_edge_ids(F)), p, q) is None


def is_flex_connected_pair(
    graph: FlexGraph,
    F: Iterable[int],
    u: int,
    v: int,
    p: int,
    q: int,
    method: str = "cuts"
) -> bool:
    """
    Whether u and v are (p,q)-flex-connected in (V, F)

    Args:
        graph: The multigraph
        F: Edge-id set
        u, v: Distinct vertices
        p, q: Flex levels
        method: "cuts" (cut condition) or "failures" (failure-set enumeration)

    Returns:
        True iff every u-v cut has >= p safe or >= p+q total edges of F
    """
    if u == v:
        raise ValueError("is_flex_connected_pair needs distinct vertices")
    if method == "failures":
        return is_flex_connected_by_failures(graph, F, u, v, p, q)
    return is_flex_connected_by_cuts(graph, F, u, v, p, q)


def check_feasible(graph: FlexGraph, F: Iterable[int], req: Requirement) -> FeasibilityVerdict:
    """
    Check (V, F) against a requirement

    Args:
        graph: The multigraph
        F: Edge-id set
        req: (p,q) requirement with scope

    Returns:
        FeasibilityVerdict; the witness is the lexicographically smallest violated canonical cut
    """
    req.validate_for(graph, solver=False)
    table = cut_table(graph, req.scope)
    mask = graph.edge_mask(graph.check_edge_ids(F))
    index = table.first_violation(mask, req.p, req.q)
    if index is None:
        return FeasibilityVerdict(True)
    safe, total = table.counts(mask, index)
    return FeasibilityVerdict(False, table.cut(index), safe, total)
