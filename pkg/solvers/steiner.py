"""
Rooted (p,q)-Flex-Steiner
Random-permutation greedy over a single-pair solver with contraction of
already connected terminals, and the per-terminal cost shares
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from network.feasibility import check_feasible
from network.graph import FlexGraph, Requirement, Solution, contract
from solvers.exact import exact_oracle
from solvers.flex_st import solve_22
from utils.errors import InvariantViolation, PreconditionError, UnsupportedRegimeError

logger = logging.getLogger(__name__)

PairSolver = Callable[[FlexGraph, int, int], Solution]


def default_pair_solver(p: int, q: int) -> PairSolver:
    """Approximate single-pair solver for (p,q); only (2,2) is wired in"""
    if (p, q) == (2, 2):
        return solve_22
    raise UnsupportedRegimeError(f"No single-pair approximation for ({p},{q}); pass pair_solver")


def exact_pair_solver(p: int, q: int) -> PairSolver:
    """Single-pair solver backed by the exact oracle"""
    def solve(graph: FlexGraph, s: int, t: int) -> Solution:
        return exact_oracle.opt_flex(graph, Requirement.pair(p, q, s, t))
    return solve


def _terminals(graph: FlexGraph, T: Iterable[int], r: int) -> List[int]:
    terminals = sorted(graph.check_vertices(T) - {r})
    graph.check_vertices([r])
    if not terminals:
        raise PreconditionError("Rooted Steiner needs a terminal other than the root")
    return terminals


def solve_rooted_steiner(
    graph: FlexGraph,
    T: Iterable[int],
    r: int,
    p: int,
    q: int,
    seed: int,
    pair_solver: Optional[PairSolver] = None,
    order: Optional[Sequence[int]] = None
) -> Solution:
    """
    Connect every terminal to the root, in random order

    Terminal j is solved as a pair problem in the graph where the root and
    terminals 1..j-1 are contracted into one vertex; chosen edges are
    mapped back to original ids. A root listed in T is dropped from T.

    Args:
        graph: The multigraph
        T: Terminal set
        r: Root
        p, q: Flex levels
        seed: Permutation seed
        pair_solver: (graph, s, t) -> Solution (default: solve_22 for (2,2))
        order: Fixed terminal order overriding the seeded permutation

    Returns:
        Solution feasible for (p,q) over T + r (meta: seed, order, pair_costs)
    """
    terminals = _terminals(graph, T, r)
    pair_solver = pair_solver or default_pair_solver(p, q)
    if order is None:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        order = [terminals[i] for i in rng.permutation(len(terminals))]
    else:
        order = [int(v) for v in order if v != r]
        if sorted(order) != terminals:
            raise PreconditionError(f"Order {order} is not a permutation of the terminals {terminals}")
    logger.info(f"Rooted ({p},{q})-Steiner: root {r}, order {order} (seed {seed})")

    chosen = set()
    pair_costs = []
    for j, terminal in enumerate(order):
        contraction = contract(graph, [r] + order[:j], r)
        vertex_map = contraction.vertex_map
        partial = pair_solver(contraction.graph, vertex_map[terminal], vertex_map[r])
        lifted = contraction.lift(partial.edge_ids)
        pair_costs.append(graph.cost_of(lifted))
        chosen.update(lifted)
        logger.debug(f"Terminal {terminal}: {len(lifted)} edges, cost {pair_costs[-1]}")

    solution = Solution.of(graph, chosen, seed=seed, order=order, pair_costs=pair_costs)
    verdict = check_feasible(graph, solution.edge_ids, Requirement.terminals(p, q, terminals + [r]))
    if not verdict:
        raise InvariantViolation(f"Rooted Steiner output infeasible: {verdict.describe()}")
    logger.info(f"Rooted Steiner solution: {len(solution.edge_ids)} edges, cost {solution.cost}")
    return solution


def beta_shares(graph: FlexGraph, T: Iterable[int], r: int, p: int, q: int) -> Dict[int, Fraction]:
    """
    Cost to flex-connect each terminal to the other terminals plus the root

    Args:
        graph: The multigraph
        T: Terminal set
        r: Root
        p, q: Flex levels

    Returns:
        Terminal -> optimal pair cost with T - t contracted into r
    """
    terminals = _terminals(graph, T, r)
    shares = {}
    for terminal in terminals:
        others = [v for v in terminals if v != terminal]
        contraction = contract(graph, [r] + others, r)
        vertex_map = contraction.vertex_map
        optimum = exact_oracle.opt_flex(
            contraction.graph, Requirement.pair(p, q, vertex_map[terminal], vertex_map[r])
        )
        shares[terminal] = optimum.cost
    return shares


@dataclass(frozen=True)
class CostShareReport:
    """Cost shares against the rooted optimum (the ratio is reported, never asserted)"""
    shares: Dict[int, Fraction]
    share_total: Fraction
    optimum: Fraction
    ratio: Optional[Fraction]

    def to_dict(self) -> dict:
        return {
            "shares": {str(t): str(c) for t, c in sorted(self.shares.items())},
            "share_total": str(self.share_total),
            "optimum": str(self.optimum),
            "ratio": float(self.ratio) if self.ratio is not None else None,
        }


def cost_share_report(graph: FlexGraph, T: Iterable[int], r: int, p: int, q: int) -> CostShareReport:
    """Cost shares, their sum and the rooted optimum"""
    terminals = _terminals(graph, T, r)
    shares = beta_shares(graph, terminals, r, p, q)
    total = sum(shares.values(), Fraction(0))
    optimum = exact_oracle.opt_flex(graph, Requirement.terminals(p, q, terminals + [r])).cost
    ratio = total / optimum if optimum else None
    logger.info(f"Cost shares {total} vs rooted optimum {optimum}")
    return CostShareReport(shares, total, optimum, ratio)
