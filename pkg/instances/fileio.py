"""
Instance and solution files

Instance format (line oriented, '#' starts a comment):
    flexnet 1
    n <vertex_count>
    e <u> <v> <cost> <S|U> [<multiplicity>]
    req <p> <q> pair <s> <t> | req <p> <q> terminals <v...> | req <p> <q> spanning

Solution format:
    sol <edge id> <edge id> ...
    cost <total>
"""
import logging
from fractions import Fraction
from itertools import groupby
from pathlib import Path
from typing import List, Tuple, Union

from instances.model import Instance
from network.graph import FlexGraph, Requirement, Safety, Scope, ScopeKind, Solution, to_cost
from utils.errors import FlexNetError, InstanceParseError

logger = logging.getLogger(__name__)

MAGIC = "flexnet 1"
IDS_PER_LINE = 20


def format_cost(cost: Fraction) -> str:
    """Exact decimal when the expansion terminates, otherwise p/q"""
    if cost.denominator == 1:
        return str(cost.numerator)
    rest, twos, fives = cost.denominator, 0, 0
    while rest % 2 == 0:
        rest, twos = rest // 2, twos + 1
    while rest % 5 == 0:
        rest, fives = rest // 5, fives + 1
    if rest != 1:
        return f"{cost.numerator}/{cost.denominator}"
    digits = max(twos, fives)
    text = str(cost.numerator * 10 ** digits // cost.denominator).rjust(digits + 1, "0")
    return f"{text[:-digits]}.{text[-digits:]}"


def format_requirement(req: Requirement) -> str:
    scope = req.scope
    if scope.kind is ScopeKind.PAIR:
        tail = f"pair {scope.vertices[0]} {scope.vertices[1]}"
    elif scope.kind is ScopeKind.TERMINALS:
        tail = "terminals " + " ".join(map(str, scope.vertices))
    else:
        tail = "spanning"
    return f"req {req.p} {req.q} {tail}"


def format_instance(instance: Instance) -> str:
    """Canonical text: edges sorted by (endpoints, safety, cost), parallel copies folded"""
    graph = instance.graph.canonical()
    lines = [MAGIC, f"n {graph.vertex_count}"]
    for record, group in groupby(graph.edges):
        count = len(list(group))
        line = f"e {record.u} {record.v} {format_cost(record.cost)} {record.safety.value}"
        lines.append(line + (f" {count}" if count > 1 else ""))
    lines.append(format_requirement(instance.requirement))
    return "\n".join(lines) + "\n"


def _int(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceParseError(f"expected an integer, got {token!r}", line_number)


def _parse_requirement(tokens: List[str], line_number: int) -> Requirement:
    if len(tokens) < 4:
        raise InstanceParseError("req needs p, q and a scope", line_number)
    p, q = _int(tokens[1], line_number), _int(tokens[2], line_number)
    kind, rest = tokens[3].lower(), [_int(t, line_number) for t in tokens[4:]]
    if kind == "pair" and len(rest) == 2:
        scope = Scope.pair(*rest)
    elif kind == "terminals" and rest:
        scope = Scope.terminals(rest)
    elif kind == "spanning" and not rest:
        scope = Scope.spanning()
    else:
        raise InstanceParseError(f"bad scope {' '.join(tokens[3:])!r}", line_number)
    return Requirement(p, q, scope)


def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((number, body.split()))
    return lines


def parse_instance(text: str, name: str = "instance") -> Instance:
    """
    Parse instance text

    Args:
        text: File contents
        name: Name for the returned Instance

    Returns:
        Instance with edges in file order (parallel copies expanded)
    """
    lines = _content_lines(text)
    end = len(text.splitlines()) + 1
    if not lines or " ".join(lines[0][1]) != MAGIC:
        raise InstanceParseError(f"expected header {MAGIC!r}", lines[0][0] if lines else 1)
    if len(lines) < 2 or lines[1][1][0] != "n" or len(lines[1][1]) != 2:
        raise InstanceParseError("expected 'n <vertex_count>'", lines[1][0] if len(lines) > 1 else end)
    vertex_count = _int(lines[1][1][1], lines[1][0])

    edges = []
    requirement = None
    for number, tokens in lines[2:]:
        try:
            if tokens[0] == "e":
                if len(tokens) not in (5, 6):
                    raise InstanceParseError("edge lines read 'e <u> <v> <cost> <S|U> [<multiplicity>]'", number)
                u, v = _int(tokens[1], number), _int(tokens[2], number)
                cost, safety = to_cost(tokens[3]), Safety.parse(tokens[4])
                count = _int(tokens[5], number) if len(tokens) == 6 else 1
                if count < 1:
                    raise InstanceParseError(f"multiplicity {count} < 1", number)
                edges += [(u, v, cost, safety)] * count
            elif tokens[0] == "req":
                if requirement is not None:
                    raise InstanceParseError("duplicate req line", number)
                requirement = _parse_requirement(tokens, number)
            else:
                raise InstanceParseError(f"unknown line type {tokens[0]!r}", number)
        except InstanceParseError:
            raise
        except FlexNetError as exc:
            raise InstanceParseError(str(exc), number)

    if requirement is None:
        raise InstanceParseError("missing req line (file truncated?)", end)
    try:
        graph = FlexGraph.build(vertex_count, edges)
        requirement.validate_for(graph, solver=False)
    except FlexNetError as exc:
        raise InstanceParseError(str(exc), end)
    return Instance(graph, requirement, name)


def format_solution(solution: Solution) -> str:
    ids = sorted(solution.edge_ids)
    lines = [
        "sol " + " ".join(map(str, ids[i:i + IDS_PER_LINE]))
        for i in range(0, len(ids), IDS_PER_LINE)
    ] or ["sol"]
    lines.append(f"cost {format_cost(solution.cost)}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str, graph: FlexGraph) -> Solution:
    """
    Parse solution text against its graph

    Returns:
        Solution; the cost line must match the recomputed cost
    """
    ids = []
    stated = None
    for number, tokens in _content_lines(text):
        if tokens[0] == "sol":
            ids += [_int(t, number) for t in tokens[1:]]
        elif tokens[0] == "cost" and len(tokens) == 2:
            try:
                stated = to_cost(tokens[1])
            except FlexNetError as exc:
                raise InstanceParseError(str(exc), number)
        else:
            raise InstanceParseError(f"unknown solution line {' '.join(tokens)!r}", number)
    try:
        solution = Solution.of(graph, ids)
    except FlexNetError as exc:
        raise InstanceParseError(str(exc))
    if stated is not None and stated != solution.cost:
        raise InstanceParseError(f"stated cost {stated} differs from edge cost {solution.cost}")
    return solution


def read_instance(path: Union[str, Path]) -> Instance:
    path = Path(path)
    instance = parse_instance(path.read_text(), name=path.stem)
    logger.debug(f"Read {path}: {instance.graph.vertex_count} vertices, {instance.graph.edge_count} edges")
    return instance


def write_instance(instance: Instance, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_instance(instance))
    logger.info(f"Instance written to {path}")


def read_solution(path: Union[str, Path], graph: FlexGraph) -> Solution:
    return parse_solution(Path(path).read_text(), graph)


def write_solution(solution: Solution, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_solution(solution))
    logger.info(f"Solution written to {path}")
