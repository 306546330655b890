"""
Exact desk-scale oracles
Branch-and-bound over edge subsets for optimal flex solutions and optimal
family covers; ground truth for every approximation-ratio check
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from config.settings import settings
from network.cuts import CutFamily, cut_table
from network.graph import FlexGraph, Requirement, Solution
from utils.errors import CapacityError, InfeasibleInstanceError, UncoverableCutError

logger = logging.getLogger(__name__)


@dataclass
class SearchStats:
    """Branch-and-bound bookkeeping"""
    nodes: int = 0
    pruned_infeasible: int = 0
    pruned_bound: int = 0


class _CoverageModel:
    """
    Coverage rows over a local bit order (bit k = k-th cheapest edge)
    A row is satisfied by mask M when popcount(M & safe) >= need_safe or
    popcount(M & all) >= need_total
    """

    def __init__(self, rows: List[Tuple[int, int]], need_safe: int, need_total: int):
        self.rows = rows
        self.need_safe = need_safe
        self.need_total = need_total

    def satisfied(self, mask: int) -> bool:
        return all(self._ok(mask, row) for row in self.rows)

    def _ok(self, mask: int, row: Tuple[int, int]) -> bool:
        all_mask, safe_mask = row
        return (mask & safe_mask).bit_count() >= self.need_safe or (mask & all_mask).bit_count() >= self.need_total

    def evaluate(self, included: int, open_: int, costs: Sequence[Fraction]) -> Optional[Fraction]:
        """
        None if even included|open_ fails some row; otherwise an admissible
        lower bound on the extra cost still needed on top of `included`
        """
        reachable = included | open_
        extra = Fraction(0)
        for row in self.rows:
            if self._ok(included, row):
                continue
            if not self._ok(reachable, row):
                return None
            crossing = open_ & row[0]
            # Lowest set bit is the cheapest open edge crossing this row
            cheapest = costs[(crossing & -crossing).bit_length() - 1]
            if cheapest > extra:
                extra = cheapest
        return extra


class ExactOracle:
    """
    Exact optimum by branch-and-bound
    Edges are decided in descending cost order, excluding before including
    """

    def __init__(self, edge_bound: Optional[int] = None, candidate_bound: Optional[int] = None):
        self.edge_bound = edge_bound or settings.oracle_edge_bound
        self.candidate_bound = candidate_bound or settings.cover_candidate_bound
        self.last_stats = SearchStats()
        logger.info(f"Exact oracle initialized (edge bound {self.edge_bound})")

    def _search(
        self,
        graph: FlexGraph,
        edge_ids: List[int],
        model_for,
    ) -> Optional[Tuple[Fraction, Tuple[int, ...]]]:
        # Local bit k = k-th cheapest edge, so the lowest set bit of a mask is its cheapest edge
        local = sorted(edge_ids, key=lambda e: (graph.edges[e].cost, e))
        costs = [graph.edges[e].cost for e in local]
        model = model_for(local)
        stats = SearchStats()
        best: List[Optional[Tuple[Fraction, Tuple[int, ...]]]] = [None]
        branch_order = list(reversed(range(len(local))))

        def ids_of(mask: int) -> Tuple[int, ...]:
            return tuple(sorted(local[k] for k in range(len(local)) if mask >> k & 1))

        def search(depth: int, included: int, open_: int, cost: Fraction) -> None:
            stats.nodes += 1
            extra = model.evaluate(included, open_, costs)
            if extra is None:
                stats.pruned_infeasible += 1
                return
            if best[0] is not None and cost + extra > best[0][0]:
                stats.pruned_bound += 1
                return
            if extra == 0 and model.satisfied(included):
                candidate = (cost, ids_of(included))
                if best[0] is None or candidate < best[0]:
                    best[0] = candidate
                return
            if depth == len(branch_order):
                return
            k = branch_order[depth]
            bit = 1 << k
            search(depth + 1, included, open_ & ~bit, cost)
            search(depth + 1, included | bit, open_ & ~bit, cost + costs[k])

        full = (1 << len(local)) - 1
        search(0, 0, full, Fraction(0))
        self.last_stats = stats
        logger.debug(
            f"Branch-and-bound: {stats.nodes} nodes, {stats.pruned_infeasible} infeasible, "
            f"{stats.pruned_bound} bounded"
        )
        return best[0]

    def opt_flex(self, graph: FlexGraph, req: Requirement) -> Solution:
        """
        Minimum-cost edge set feasible for req

        Args:
            graph: The multigraph (at most edge_bound edges)
            req: (p,q) requirement

        Returns:
            Optimal Solution; ties broken by lexicographic edge-id tuple
        """
        req.validate_for(graph, solver=False)
        if graph.edge_count > self.edge_bound:
            raise CapacityError("edge_count", graph.edge_count, self.edge_bound)
        table = cut_table(graph, req.scope)

        def model_for(local: List[int]) -> _CoverageModel:
            rows = []
            for all_mask, safe_mask in zip(table.all_masks, table.safe_masks):
                rows.append((_relabel(all_mask, local), _relabel(safe_mask, local)))
            return _CoverageModel(rows, req.p, req.p + req.q)

        result = self._search(graph, list(range(graph.edge_count)), model_for)
        if result is None:
            index = table.first_violation(graph.edge_mask(graph.edge_ids), req.p, req.q)
            raise InfeasibleInstanceError(
                f"No edge set satisfies {req}", cut=table.cut(index) if index is not None else None
            )
        cost, ids = result
        logger.info(f"opt_flex {req}: cost {cost} with {len(ids)} edges")
        return Solution.of(graph, ids, nodes=self.last_stats.nodes)

    def opt_cover(self, graph: FlexGraph, candidates: Iterable[int], family: CutFamily) -> Solution:
        """
        Minimum-cost candidate subset crossing every family cut

        Args:
            graph: The multigraph
            candidates: Candidate edges (at most candidate_bound)
            family: Cut family

        Returns:
            Optimal Solution
        """
        candidates = sorted(graph.check_edge_ids(candidates))
        if len(candidates) > self.candidate_bound:
            raise CapacityError("candidate_count", len(candidates), self.candidate_bound)
        if not family:
            return Solution.of(graph, ())

        def model_for(local: List[int]) -> _CoverageModel:
            rows = []
            for cut in family.cuts:
                mask = 0
                for k, e in enumerate(local):
                    if graph.edges[e].crosses(cut.members):
                        mask |= 1 << k
                rows.append((mask, 0))
            return _CoverageModel(rows, 1, 1)

        result = self._search(graph, candidates, model_for)
        if result is None:
            for cut in family.cuts:
                if not any(graph.edges[e].crosses(cut.members) for e in candidates):
                    raise UncoverableCutError(f"No candidate edge crosses {cut}", cut=cut)
            raise UncoverableCutError(f"Family '{family.provenance}' cannot be covered")
        cost, ids = result
        logger.debug(f"opt_cover '{family.provenance}': cost {cost}")
        return Solution.of(graph, ids, nodes=self.last_stats.nodes)


def _relabel(mask: int, local: List[int]) -> int:
    out = 0
    for k, e in enumerate(local):
        if mask >> e & 1:
            out |= 1 << k
    return out


# Global exact oracle instance
exact_oracle = ExactOracle()
