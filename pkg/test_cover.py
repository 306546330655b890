"""
Tests for the primal-dual uncrossable cover and the exact ring cover
"""
from fractions import Fraction

import pytest

from network.cuts import CutFamily
from network.families import is_uncrossable, violated_cuts_for_augmentation
from network.graph import FlexGraph, Requirement
from solvers.cover import covers, ring_cover_exact, wgmv_cover
from solvers.exact import exact_oracle
from utils.errors import NotRingFamilyError, UncoverableCutError, UncrossableFamilyError


@pytest.fixture
def triangle():
    return FlexGraph.build(3, [(0, 1, 1, "U"), (1, 2, 1, "U"), (0, 2, 3, "S")])


def test_empty_family(triangle):
    solution = wgmv_cover(triangle, triangle.edge_ids, CutFamily.build([], "empty", 3))
    assert solution.edge_ids == frozenset()
    assert solution.cost == 0


def test_two_singletons(triangle):
    family = CutFamily.build([{0}, {2}], "ends", 3)
    solution = wgmv_cover(triangle, triangle.edge_ids, family)
    assert solution.edge_ids == frozenset({0, 1})
    assert solution.cost == 2
    assert solution.meta["dual_total"] == 2
    assert solution.meta["dual_state"].tight_edges == [0, 1]
    assert exact_oracle.opt_cover(triangle, triangle.edge_ids, family).cost == 2


def test_uncoverable_cut(triangle):
    family = CutFamily.build([{0}], "lonely", 3)
    with pytest.raises(UncoverableCutError) as info:
        wgmv_cover(triangle, [1], family)
    assert info.value.cut.members == frozenset({0})


def test_crossing_family_is_refused(st22):
    family = violated_cuts_for_augmentation(st22.graph, st22.graph.edge_ids, st22.requirement)
    with pytest.raises(UncrossableFamilyError) as info:
        wgmv_cover(st22.graph, st22.graph.edge_ids, family)
    assert set(info.value.pair) == {frozenset({0, 1}), frozenset({0, 2})}


def test_ring_cover_single_cut():
    graph = FlexGraph.build(2, [(0, 1, 7, "U"), (0, 1, 9, "S")])
    solution = ring_cover_exact(graph, graph.edge_ids, CutFamily.build([{0}], "one", 2))
    assert solution.edge_ids == frozenset({0})
    assert solution.cost == 7


def test_ring_cover_prefers_one_long_edge():
    graph = FlexGraph.build(4, [(0, 3, 5, "U"), (0, 1, 2, "U"), (1, 2, 2, "U"), (2, 3, 2, "U")])
    family = CutFamily.build([{0}, {0, 1}, {0, 1, 2}], "chain", 4)
    solution = ring_cover_exact(graph, graph.edge_ids, family)
    assert solution.edge_ids == frozenset({0})
    assert solution.cost == 5
    assert wgmv_cover(graph, graph.edge_ids, family).cost >= solution.cost


def test_ring_cover_refuses_non_ring(triangle):
    with pytest.raises(NotRingFamilyError):
        ring_cover_exact(triangle, triangle.edge_ids, CutFamily.build([{0}, {2}], "ends", 3))


def _assert_dual_feasible(graph, candidates, state):
    for e in candidates:
        edge = graph.edges[e]
        load = sum((y for members, y in state.duals.items() if edge.crosses(members)), Fraction(0))
        assert load <= edge.cost


def test_wgmv_within_twice_optimum(make_random):
    families = 0
    for seed in range(600):
        if families == 50:
            break
        q = seed % 3
        instance = make_random(seed, n=5, extra_edges=12, p=2, q=q + 1, scope="spanning")
        graph = instance.graph
        F1 = exact_oracle.opt_flex(graph, Requirement.spanning(2, q))
        family = violated_cuts_for_augmentation(graph, F1.edge_ids, Requirement.spanning(2, q + 1))
        if not family:
            continue
        assert is_uncrossable(family), (seed, q)
        candidates = graph.edge_ids - F1.edge_ids
        cover = wgmv_cover(graph, candidates, family)
        optimum = exact_oracle.opt_cover(graph, candidates, family)
        state = cover.meta["dual_state"]

        assert covers(graph, cover.edge_ids, family)
        assert state.total <= optimum.cost <= cover.cost <= 2 * optimum.cost
        assert cover.cost <= 2 * state.total
        _assert_dual_feasible(graph, candidates, state)
        for e in cover.edge_ids:
            assert not covers(graph, cover.edge_ids - {e}, family)
        families += 1
    assert families == 50
