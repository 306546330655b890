"""
Tests for the (2,2)-Flex-ST pipeline
"""
from fractions import Fraction

import pytest

from network.cuts import enumerate_cuts
from network.families import is_ring_family
from network.feasibility import check_feasible
from network.graph import FlexGraph, Scope, boundary
from solvers.cover import ring_cover_exact
from solvers.exact import exact_oracle
from solvers.flex_st import (
    base_solution,
    critical_safe_edges,
    flow_paths,
    partition_families,
    solve_22,
    support_paths,
    violated_family,
)
from utils.errors import InfeasibleInstanceError, PreconditionError


def test_base_on_extended_st22(st22_plus):
    base = base_solution(st22_plus.graph, 0, 3)
    assert base.edge_ids == frozenset(range(6))
    assert base.cost == 6
    assert base.meta["flow_cost"] == 8


def test_base_takes_two_safe_edges():
    graph = FlexGraph.build(2, [(0, 1, 1, "S"), (0, 1, 1, "S"), (0, 1, 2, "U")])
    assert base_solution(graph, 0, 1).edge_ids == frozenset({0, 1})


def test_four_unsafe_paths_need_no_augmentation():
    graph = FlexGraph.build(2, [(0, 1, 1, "U")] * 4)
    solution = solve_22(graph, 0, 1)
    assert solution.edge_ids == frozenset(range(4))
    assert solution.meta["family_size"] == 0


def test_base_infeasible():
    graph = FlexGraph.build(2, [(0, 1, 1, "S"), (0, 1, 1, "U")])
    with pytest.raises(InfeasibleInstanceError) as info:
        base_solution(graph, 0, 1)
    assert info.value.cut.members == frozenset({0})


def test_st22_paths_and_rings(st22):
    F = st22.graph.edge_ids
    family = violated_family(st22.graph, F, 0, 3)
    assert family.keys() == [(0, 1), (0, 2)]
    assert critical_safe_edges(st22.graph, F, family) == frozenset({0, 1})

    paths = support_paths(st22.graph, F, 0, 3)
    assert [p.edge_ids for p in paths] == [(0, 2), (0, 3), (1, 4)]
    rings = partition_families(st22.graph, family, paths, F)
    assert [r.keys() for r in rings] == [[(0, 2)], [(0, 2)], [(0, 1)]]
    assert all(is_ring_family(r) for r in rings)


def test_support_paths_need_a_violated_cut(st22_plus):
    with pytest.raises(PreconditionError):
        support_paths(st22_plus.graph, st22_plus.graph.edge_ids, 0, 3)


def test_solve_22_extended_st22(st22_plus):
    solution = solve_22(st22_plus.graph, 0, 3)
    assert solution.edge_ids == frozenset(range(7))
    assert solution.cost == 7
    assert solution.meta["base_cost"] == 6
    assert solution.meta["family_size"] == 2
    assert solution.meta["ring_costs"] == [1, 1, 1]


def test_random_pairs_flow_and_ring_structure(make_random):
    for seed in range(12):
        instance = make_random(seed, n=6, extra_edges=10, p=2, q=2, scope="pair")
        graph = instance.graph
        s, t = instance.requirement.scope.vertices
        base = base_solution(graph, s, t)

        family = violated_family(graph, base.edge_ids, s, t)
        if family:
            paths = flow_paths(graph, base.edge_ids, s, t)
            assert len(paths) == 4
            for e in critical_safe_edges(graph, base.edge_ids, family):
                assert sum(1 for p in paths if e in p) >= 2
            rings = partition_families(graph, family, support_paths(graph, base.edge_ids, s, t), base.edge_ids)
            for ring in rings:
                assert is_ring_family(ring)
                exact = ring_cover_exact(graph, graph.edge_ids - base.edge_ids, ring)
                assert exact.cost == exact_oracle.opt_cover(graph, graph.edge_ids - base.edge_ids, ring).cost


def _base_cut_shape(b) -> bool:
    return b.safe >= 2 or b.total >= 4 or (b.safe == 1 and b.unsafe == 2)


def test_random_pairs_within_five(pair_corpus):
    worst = Fraction(0)
    for instance in pair_corpus:
        graph, req = instance.graph, instance.requirement
        s, t = req.scope.vertices
        optimum = exact_oracle.opt_flex(graph, req)

        base = base_solution(graph, s, t)
        assert base.cost <= 2 * optimum.cost
        for cut in enumerate_cuts(graph, Scope.pair(s, t)):
            assert _base_cut_shape(boundary(graph, base.edge_ids, cut)), (instance.name, cut)

        solution = solve_22(graph, s, t)
        assert check_feasible(graph, solution.edge_ids, req)
        assert solution.cost <= 5 * optimum.cost
        worst = max(worst, solution.cost / optimum.cost)
    assert len(pair_corpus) == 50
    assert worst <= 5
