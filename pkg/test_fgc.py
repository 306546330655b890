"""
Tests for spanning (p,q)-FGC: factors, figure obstructions and random ratios
"""
import pytest

from instances.named import gen_paper
from network.feasibility import check_feasible
from network.graph import FlexGraph, Solution
from solvers.exact import exact_oracle
from solvers.fgc import (
    approximation_factor,
    augment_one_level,
    base_p0,
    is_supported,
    solve_fgc,
    staged_augment,
)
from utils.errors import PreconditionError, UncrossableFamilyError, UnsupportedRegimeError

X1_X2 = frozenset({1, 2})
X2_X3 = frozenset({2, 3})


@pytest.mark.parametrize("p,q,staged,factor", [
    (2, 0, False, 2),
    (2, 1, False, 4),
    (2, 2, False, 6),
    (2, 3, False, 8),
    (3, 0, False, 2),
    (3, 1, False, 4),
    (3, 2, False, 10),
    (3, 3, False, 16),
    (2, 4, True, 16),
    (4, 4, False, 28),
])
def test_approximation_factor(p, q, staged, factor):
    assert approximation_factor(p, q, staged) == factor


def test_supported_regimes():
    assert is_supported(2, 9)
    assert is_supported(4, 4)
    assert not is_supported(3, 4)
    assert not is_supported(5, 4)
    assert not is_supported(2, 5, staged=True)
    assert not is_supported(0, 1)
    with pytest.raises(UnsupportedRegimeError):
        approximation_factor(3, 4)


def test_single_family_only_where_uncrossable(fgc32):
    F = Solution.of(fgc32.graph, fgc32.graph.edge_ids)
    with pytest.raises(UnsupportedRegimeError):
        augment_one_level(fgc32.graph, F, 3, 1)


@pytest.mark.parametrize("p", [3, 5])
def test_odd_p_last_stage_crosses(p):
    instance = gen_paper("FIG-FGC-P4ODD", p=p)
    F = Solution.of(instance.graph, instance.graph.edge_ids)
    with pytest.raises(UncrossableFamilyError) as info:
        staged_augment(instance.graph, F, p, 3)
    assert info.value.stage == p - 1
    assert set(info.value.pair) == {X1_X2, X2_X3}


def test_fgc44_last_stage_crosses():
    instance = gen_paper("FIG-FGC44")
    F = Solution.of(instance.graph, instance.graph.edge_ids)
    with pytest.raises(UncrossableFamilyError) as info:
        staged_augment(instance.graph, F, 4, 4)
    assert info.value.stage == 3
    assert set(info.value.pair) == {X1_X2, X2_X3}


def test_solve_fgc_refuses_open_regimes(fgc32):
    with pytest.raises(UnsupportedRegimeError):
        solve_fgc(fgc32.graph, 3, 4)
    with pytest.raises(PreconditionError):
        solve_fgc(fgc32.graph, 0, 1)


def test_base_p0_is_optimal():
    graph = FlexGraph.build(3, [(0, 1, 1, "U"), (1, 2, 1, "U"), (0, 2, 1, "S"), (0, 2, 9, "U")])
    base = base_p0(graph, 2)
    assert base.edge_ids == frozenset({0, 1, 2})
    assert base.cost == 3


def test_custom_base_solver(make_random):
    instance = make_random(3, n=5, extra_edges=12, p=2, q=1, scope="spanning")
    graph = instance.graph
    solution = solve_fgc(graph, 2, 1, base_solver=lambda g, p: Solution.of(g, g.edge_ids))
    assert solution.edge_ids == graph.edge_ids
    assert solution.meta["level_costs"] == [0]


@pytest.mark.parametrize("p,q,staged", [
    (2, 1, False),
    (2, 2, False),
    (2, 2, True),
    (2, 3, False),
    (3, 1, False),
    (3, 2, False),
    (3, 3, False),
    (2, 4, True),
])
def test_random_ratios(spanning_corpus, p, q, staged):
    factor = approximation_factor(p, q, staged)
    corpus = spanning_corpus(p, q)
    assert len(corpus) == 30
    for instance in corpus:
        graph, req = instance.graph, instance.requirement
        solution = solve_fgc(graph, p, q, staged=staged)
        optimum = exact_oracle.opt_flex(graph, req)
        assert check_feasible(graph, solution.edge_ids, req), instance.name
        assert solution.meta["factor"] == factor
        assert len(solution.meta["level_costs"]) == q
        assert solution.cost <= factor * optimum.cost, instance.name
