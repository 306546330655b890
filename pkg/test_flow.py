"""
Tests for max-flow, min-cost flow and flow decomposition
"""
from fractions import Fraction

import pytest

from network.cuts import weighted_min_cut
from network.graph import FlexGraph, Scope
from solvers.flow import CapacitatedNet, decompose, max_flow, min_cost_flow
from utils.errors import InfeasibleInstanceError, StructuralError


def test_max_flow_disjoint_paths():
    graph = FlexGraph.build(4, [(0, 1, 1, "U"), (1, 3, 1, "U"), (0, 2, 1, "U"), (2, 3, 1, "U")])
    value, flow = max_flow(CapacitatedNet.uniform(graph), 0, 3)
    assert value == 2
    assert flow == {0: 1, 1: 1, 2: 1, 3: 1}


def test_max_flow_disconnected():
    graph = FlexGraph.build(3, [(0, 1, 1, "S")])
    value, _ = max_flow(CapacitatedNet.uniform(graph), 0, 2)
    assert value == 0


def test_safety_weighted_flow_on_st22(st22):
    net = CapacitatedNet.safety_weighted(st22.graph)
    value, flow = max_flow(net, 0, 3)
    assert value == 4
    assert flow == {0: 2, 1: 2, 2: 1, 3: 1, 4: 1, 5: 1}
    cut_value, _ = weighted_min_cut(st22.graph, net.capacities, Scope.pair(0, 3))
    assert cut_value == value


def test_max_flow_matches_min_cut(random_multigraph):
    for seed in range(20):
        graph = random_multigraph(seed, n=5, m=9)
        net = CapacitatedNet.safety_weighted(graph)
        value, _ = max_flow(net, 0, 4)
        cut_value, _ = weighted_min_cut(graph, net.capacities, Scope.pair(0, 4))
        assert value == cut_value


def test_min_cost_flow_prefers_cheap_edge():
    graph = FlexGraph.build(2, [(0, 1, 1, "U"), (0, 1, 5, "U")])
    net = CapacitatedNet.uniform(graph)
    assert min_cost_flow(net, 0, 1, 0).cost == 0
    one = min_cost_flow(net, 0, 1, 1)
    assert one.cost == 1
    assert one.support == frozenset({0})
    assert min_cost_flow(net, 0, 1, 2).cost == 6


def test_min_cost_flow_routes_around():
    graph = FlexGraph.build(3, [(0, 1, 1, "U"), (1, 2, 1, "U"), (0, 2, 5, "U")])
    net = CapacitatedNet.uniform(graph)
    first = min_cost_flow(net, 0, 2, 1)
    assert first.cost == 2
    assert first.flow == {0: 1, 1: 1, 2: 0}
    assert min_cost_flow(net, 0, 2, 2).cost == 7


def test_min_cost_flow_is_monotone(random_multigraph):
    for seed in range(10):
        graph = random_multigraph(seed, n=5, m=10)
        net = CapacitatedNet.safety_weighted(graph)
        top, _ = max_flow(net, 0, 4)
        costs = [min_cost_flow(net, 0, 4, v).cost for v in range(top + 1)]
        assert costs == sorted(costs)


def test_min_cost_flow_rational_costs():
    graph = FlexGraph.build(2, [(0, 1, "1/3", "S"), (0, 1, "0.5", "U")])
    result = min_cost_flow(CapacitatedNet.safety_weighted(graph), 0, 1, 3)
    assert result.cost == Fraction(2, 3) + Fraction(1, 2)


def test_min_cost_flow_unattainable(st22):
    with pytest.raises(InfeasibleInstanceError) as info:
        min_cost_flow(CapacitatedNet.safety_weighted(st22.graph), 0, 3, 5)
    assert info.value.cut.members == frozenset({0})


def test_min_cost_flow_st22_base(st22):
    result = min_cost_flow(CapacitatedNet.safety_weighted(st22.graph), 0, 3, 4)
    assert result.cost == 8
    assert result.support == st22.graph.edge_ids


def test_decompose_st22_flow(st22):
    _, flow = max_flow(CapacitatedNet.safety_weighted(st22.graph), 0, 3)
    paths = decompose(st22.graph, flow, 0, 3)
    assert [p.edge_ids for p in paths] == [(0, 2), (0, 3), (1, 4), (1, 5)]
    assert paths[0].vertices == (0, 1, 3)
    assert all(p.source == 0 and p.sink == 3 for p in paths)
    for safe_edge in st22.graph.safe_ids:
        assert sum(1 for p in paths if safe_edge in p) == 2


def test_decompose_cancels_cycles():
    graph = FlexGraph.build(3, [(0, 1, 1, "U"), (1, 2, 1, "U"), (0, 2, 1, "U"), (0, 1, 1, "U")])
    with_cycle = decompose(graph, {0: 2, 1: 1, 2: 0, 3: -1}, 0, 2)
    without_cycle = decompose(graph, {0: 1, 1: 1, 2: 0, 3: 0}, 0, 2)
    assert [p.edge_ids for p in with_cycle] == [p.edge_ids for p in without_cycle] == [(0, 1)]
    assert with_cycle[0].vertices == (0, 1, 2)


def test_decompose_rejects_broken_conservation():
    graph = FlexGraph.build(3, [(0, 1, 1, "U"), (1, 2, 1, "U")])
    with pytest.raises(StructuralError):
        decompose(graph, {0: 1, 1: 0}, 0, 2)
