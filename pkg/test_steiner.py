"""
Tests for rooted Flex-Steiner and the terminal cost shares
"""
from fractions import Fraction
from itertools import permutations

import pytest

from network.feasibility import check_feasible
from network.graph import FlexGraph
from solvers.exact import exact_oracle
from solvers.steiner import (
    beta_shares,
    cost_share_report,
    default_pair_solver,
    exact_pair_solver,
    solve_rooted_steiner,
)
from utils.errors import PreconditionError, UnsupportedRegimeError


@pytest.fixture
def safe_triangle():
    # root 0, terminals 1 and 2
    return FlexGraph.build(3, [(0, 1, 2, "S"), (0, 2, 3, "S"), (1, 2, 10, "S")])


def test_triangle_any_order(safe_triangle):
    for seed in range(4):
        solution = solve_rooted_steiner(safe_triangle, [1, 2], 0, 1, 1, seed, exact_pair_solver(1, 1))
        assert solution.edge_ids == frozenset({0, 1})
        assert solution.cost == 5
        assert sorted(solution.meta["order"]) == [1, 2]
        assert sum(solution.meta["pair_costs"]) == 5


def test_root_in_terminals_is_dropped(safe_triangle):
    solution = solve_rooted_steiner(safe_triangle, [0, 1, 2], 0, 1, 1, 3, exact_pair_solver(1, 1))
    assert sorted(solution.meta["order"]) == [1, 2]


def test_needs_a_terminal_besides_root(safe_triangle):
    with pytest.raises(PreconditionError):
        solve_rooted_steiner(safe_triangle, [0], 0, 1, 1, 0, exact_pair_solver(1, 1))


def test_default_pair_solver_regimes():
    assert default_pair_solver(2, 2) is not None
    with pytest.raises(UnsupportedRegimeError):
        default_pair_solver(1, 1)


@pytest.mark.parametrize("seed", range(5))
def test_exact_pair_solver_on_random_terminals(make_random, seed):
    instance = make_random(seed, n=5, extra_edges=6, p=1, q=1, scope="terminals", terminal_count=3)
    graph, T = instance.graph, list(instance.requirement.scope.vertices)
    first = solve_rooted_steiner(graph, T, T[0], 1, 1, seed, exact_pair_solver(1, 1))
    again = solve_rooted_steiner(graph, T, T[0], 1, 1, seed, exact_pair_solver(1, 1))

    assert first.edge_ids == again.edge_ids
    assert first.meta["order"] == again.meta["order"]
    assert check_feasible(graph, first.edge_ids, instance.requirement)
    assert first.cost >= exact_oracle.opt_flex(graph, instance.requirement).cost


@pytest.mark.parametrize("instance_seed", range(20))
def test_default_solver_on_random_terminals(make_random, instance_seed):
    instance = make_random(instance_seed, n=5, extra_edges=10, p=2, q=2, scope="terminals", terminal_count=3)
    graph, T = instance.graph, list(instance.requirement.scope.vertices)
    for seed in range(5):
        solution = solve_rooted_steiner(graph, T, T[0], 2, 2, seed)
        assert sorted(solution.meta["order"]) == sorted(T[1:])
        assert check_feasible(graph, solution.edge_ids, instance.requirement), (instance_seed, seed)


def test_every_order_with_the_default_solver(make_random):
    instance = make_random(4, n=5, extra_edges=12, p=2, q=2, scope="terminals", terminal_count=4)
    graph, T = instance.graph, list(instance.requirement.scope.vertices)
    r, terminals = T[0], T[1:]
    optimum = exact_oracle.opt_flex(graph, instance.requirement).cost
    for order in permutations(terminals):
        solution = solve_rooted_steiner(graph, T, r, 2, 2, 0, order=order)
        assert solution.meta["order"] == list(order)
        assert check_feasible(graph, solution.edge_ids, instance.requirement), order
        assert solution.cost >= optimum


def test_fixed_order_must_permute_the_terminals(safe_triangle):
    solver = exact_pair_solver(1, 1)
    solution = solve_rooted_steiner(safe_triangle, [1, 2], 0, 1, 1, 0, solver, order=[2, 0, 1])
    assert solution.meta["order"] == [2, 1]
    with pytest.raises(PreconditionError):
        solve_rooted_steiner(safe_triangle, [1, 2], 0, 1, 1, 0, solver, order=[1])
    with pytest.raises(PreconditionError):
        solve_rooted_steiner(safe_triangle, [1, 2], 0, 1, 1, 0, solver, order=[1, 1])


def test_every_order_with_the_exact_pair_solver(make_random):
    instance = make_random(7, n=6, extra_edges=7, p=1, q=1, scope="terminals", terminal_count=4)
    graph, T = instance.graph, list(instance.requirement.scope.vertices)
    optimum = exact_oracle.opt_flex(graph, instance.requirement).cost
    for order in permutations(T[1:]):
        solution = solve_rooted_steiner(graph, T, T[0], 1, 1, 0, exact_pair_solver(1, 1), order=order)
        assert check_feasible(graph, solution.edge_ids, instance.requirement), order
        assert solution.cost >= optimum


def test_beta_shares(safe_triangle):
    assert beta_shares(safe_triangle, [1, 2], 0, 1, 1) == {1: 2, 2: 3}


def test_cost_share_report(safe_triangle):
    report = cost_share_report(safe_triangle, [0, 1, 2], 0, 1, 1)
    assert report.share_total == 5
    assert report.optimum == 5
    assert report.ratio == Fraction(1)
    assert report.to_dict() == {
        "shares": {"1": "2", "2": "3"},
        "share_total": "5",
        "optimum": "5",
        "ratio": 1.0,
    }


def test_shares_on_path():
    # 0 - 1 - 2 with the far terminal sharing the middle edge
    graph = FlexGraph.build(3, [(0, 1, 4, "S"), (1, 2, 1, "S")])
    report = cost_share_report(graph, [1, 2], 0, 1, 1)
    assert report.shares == {1: 1, 2: 1}
    assert report.optimum == 5
    assert report.ratio == Fraction(2, 5)
