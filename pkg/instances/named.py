"""
Named instances
The integrality-gap family and four small multigraphs showing where
augmentation families stop being uncrossable. Every construction is
checked against its cut properties before it is handed out.
"""
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from network.cuts import CutFamily
from network.families import is_uncrossable, stage_family, violated_cuts_for_augmentation
from network.feasibility import check_feasible
from network.graph import FlexGraph, Requirement, boundary
from instances.model import Instance
from utils.errors import FlexNetError, GenerationError

logger = logging.getLogger(__name__)

EdgeSpec = Tuple[int, int, object, str]

X1_X2 = frozenset({1, 2})
X2_X3 = frozenset({2, 3})


def _bundle(u: int, v: int, cost, safety: str, count: int) -> List[EdgeSpec]:
    return [(u, v, cost, safety)] * count


def gap(k: int) -> Instance:
    """s = 0, t = 1, v_i = 2..k+2; two unsafe s-v_i edges of cost 1/2, one safe v_i-t edge of cost k+1"""
    if k < 1:
        raise GenerationError(f"GAP needs k >= 1, got {k}")
    edges: List[EdgeSpec] = []
    for v in range(2, k + 3):
        edges += _bundle(0, v, Fraction(1, 2), "U", 2)
        edges.append((v, 1, k + 1, "S"))
    graph = FlexGraph.build(k + 3, edges)
    return Instance(graph, Requirement.pair(1, k, 0, 1), f"GAP({k})", {"k": k})


def fig_st22(extended: bool = False) -> Instance:
    """s = 0, x1 = 1, x2 = 2, t = 3; the extended variant adds spare edges to choose from"""
    edges = [(0, 1, 1, "S"), (0, 2, 1, "S")]
    edges += _bundle(1, 3, 1, "U", 2) + _bundle(2, 3, 1, "U", 2)
    if extended:
        edges += [(1, 2, 1, "U"), (0, 3, 3, "U"), (1, 3, 5, "S")]
    graph = FlexGraph.build(4, edges)
    name = "FIG-ST22" + ("+" if extended else "")
    return Instance(graph, Requirement.pair(2, 2, 0, 3), name, {"extended": extended})


def fig_fgc32() -> Instance:
    """y = 0, x1 = 1, x2 = 2, x3 = 3; (3,1)-feasible with a crossing (3,2) family"""
    edges = [(1, 0, 1, "S"), (2, 3, 1, "S")] + _bundle(3, 0, 1, "S", 2)
    edges += _bundle(1, 2, 1, "U", 2) + [(1, 0, 1, "U"), (2, 3, 1, "U")]
    return Instance(FlexGraph.build(4, edges), Requirement.spanning(3, 2), "FIG-FGC32", {})


def fig_fgc_p4odd(p: int) -> Instance:
    """y = 0, x1 = 1, x2 = 2, x3 = 3; (p,3)-feasible for odd p >= 3, last stage family crosses"""
    if p < 3 or p % 2 == 0:
        raise GenerationError(f"FIG-FGC-P4ODD needs odd p >= 3, got {p}")
    edges = _bundle(1, 2, 1, "S", (p - 3) // 2) + _bundle(1, 2, 1, "U", 4)
    edges += _bundle(2, 3, 1, "S", (p - 1) // 2) + _bundle(2, 3, 1, "U", 2)
    edges += _bundle(1, 0, 1, "S", (p - 1) // 2) + _bundle(1, 0, 1, "U", 2)
    edges += _bundle(3, 0, 1, "S", (p + 1) // 2)
    return Instance(FlexGraph.build(4, edges), Requirement.spanning(p, 4), f"FIG-FGC-P4ODD({p})", {"p": p})


def fig_fgc44() -> Instance:
    """y = 0, x1 = 1, x2 = 2, x3 = 3; (4,4)-feasible, last stage family crosses"""
    edges = _bundle(3, 0, 1, "S", 3)
    edges += [(1, 0, 1, "S")] + _bundle(1, 0, 1, "U", 3)
    edges += _bundle(2, 3, 1, "S", 2) + _bundle(2, 3, 1, "U", 2)
    edges += _bundle(1, 2, 1, "U", 5)
    return Instance(FlexGraph.build(4, edges), Requirement.spanning(4, 5), "FIG-FGC44", {})


def _counts(instance: Instance, members) -> Tuple[int, int]:
    b = boundary(instance.graph, instance.graph.edge_ids, members)
    return b.safe, b.total


def _expect(condition: bool, name: str, message: str) -> None:
    if not condition:
        raise GenerationError(f"{name} reconstruction drifted: {message}")


def _check_crossing_pair(family: CutFamily, pair, name: str) -> None:
    verdict = is_uncrossable(family)
    _expect(not verdict and set(verdict.pair) == set(pair), name, f"expected crossing pair, got {verdict.describe()}")


def _verify_gap(instance: Instance) -> None:
    k = instance.parameters["k"]
    graph = instance.graph
    _expect(graph.vertex_count == k + 3, instance.name, "vertex count")
    _expect(graph.edge_count == 3 * (k + 1), instance.name, "edge count")
    _expect(graph.cost_of(graph.safe_ids) == (k + 1) ** 2, instance.name, "safe edge cost")
    _expect(check_feasible(graph, graph.edge_ids, instance.requirement).feasible, instance.name, "E infeasible")


def _verify_st22(instance: Instance) -> None:
    graph, req = instance.graph, instance.requirement
    if instance.parameters.get("extended"):
        _expect(check_feasible(graph, graph.edge_ids, req).feasible, instance.name, "E infeasible for (2,2)")
        return
    family = violated_cuts_for_augmentation(graph, graph.edge_ids, req)
    _expect(family.keys() == [(0, 1), (0, 2)], instance.name, f"violated family {family.keys()}")
    _check_crossing_pair(family, (frozenset({0, 1}), frozenset({0, 2})), instance.name)


def _verify_fgc32(instance: Instance) -> None:
    graph, req = instance.graph, instance.requirement
    for members in (X1_X2, X2_X3):
        _expect(_counts(instance, members) == (2, 4), instance.name, f"{sorted(members)} is not 2 safe + 2 unsafe")
    for members in (X1_X2 | X2_X3, X2_X3 - X1_X2):
        _expect(_counts(instance, members)[0] == 3, instance.name, f"{sorted(members)} lacks 3 safe edges")
    family = violated_cuts_for_augmentation(graph, graph.edge_ids, req)
    _check_crossing_pair(family, (X1_X2, X2_X3), instance.name)


def _verify_last_stage(instance: Instance, p: int, q: int, closure_checks: Dict[frozenset, Callable]) -> None:
    graph, req = instance.graph, instance.requirement
    _expect(check_feasible(graph, graph.edge_ids, req.with_levels(q=q)).feasible, instance.name, f"E not ({p},{q})-feasible")
    for members in (X1_X2, X2_X3):
        _expect(_counts(instance, members) == (p - 1, p + q), instance.name, f"{sorted(members)} boundary")
    for members, check in closure_checks.items():
        _expect(check(*_counts(instance, members)), instance.name, f"closure {sorted(members)} violated")
    for stage in range(p - 1):
        _expect(not stage_family(graph, graph.edge_ids, p, q, stage), instance.name, f"stage {stage} nonempty")
    _check_crossing_pair(stage_family(graph, graph.edge_ids, p, q, p - 1), (X1_X2, X2_X3), instance.name)


def _verify_p4odd(instance: Instance) -> None:
    p = instance.parameters["p"]
    has_p_safe = lambda safe, total: safe == p
    has_p4_total = lambda safe, total: total == p + 4
    _verify_last_stage(instance, p, 3, {
        X1_X2 | X2_X3: has_p_safe,
        X2_X3 - X1_X2: has_p_safe,
        X1_X2 & X2_X3: has_p4_total,
        X1_X2 - X2_X3: has_p4_total,
    })


def _verify_fgc44(instance: Instance) -> None:
    satisfied = lambda safe, total: safe >= 4 or total >= 9
    _verify_last_stage(instance, 4, 4, {
        X1_X2 | X2_X3: satisfied,
        X1_X2 & X2_X3: satisfied,
        X1_X2 - X2_X3: satisfied,
        X2_X3 - X1_X2: satisfied,
    })


BUILDERS: Dict[str, Callable[..., Instance]] = {
    "GAP": gap,
    "FIG-ST22": fig_st22,
    "FIG-FGC32": fig_fgc32,
    "FIG-FGC-P4ODD": fig_fgc_p4odd,
    "FIG-FGC44": fig_fgc44,
}

CHECKLISTS: Dict[str, Callable[[Instance], None]] = {
    "GAP": _verify_gap,
    "FIG-ST22": _verify_st22,
    "FIG-FGC32": _verify_fgc32,
    "FIG-FGC-P4ODD": _verify_p4odd,
    "FIG-FGC44": _verify_fgc44,
}


def verify_figure(name: str, instance: Instance) -> None:
    """
    Run the cut-property checklist of a named instance

    Raises:
        GenerationError: a property does not hold
    """
    if name not in CHECKLISTS:
        raise GenerationError(f"Unknown instance name: {name}")
    try:
        CHECKLISTS[name](instance)
    except GenerationError:
        raise
    except FlexNetError as exc:
        raise GenerationError(f"{instance.name} checklist failed: {exc}")
    logger.debug(f"{instance.name} passed its checklist")


def gen_paper(name: str, **parameters) -> Instance:
    """
    Build and verify a named instance

    Args:
        name: GAP, FIG-ST22, FIG-FGC32, FIG-FGC-P4ODD or FIG-FGC44
        **parameters: k for GAP, p for FIG-FGC-P4ODD, extended for FIG-ST22

    Returns:
        Verified Instance
    """
    key = name.upper()
    if key not in BUILDERS:
        raise GenerationError(f"Unknown instance name: {name} (known: {', '.join(BUILDERS)})")
    try:
        instance = BUILDERS[key](**parameters)
    except TypeError as exc:
        raise GenerationError(f"Bad parameters for {key}: {exc}")
    verify_figure(key, instance)
    logger.info(f"Generated {instance.name}: {instance.graph.vertex_count} vertices, {instance.graph.edge_count} edges")
    return instance
