"""
Command-line interface
Exit codes: 0 success/feasible, 1 infeasible or violated (witness on stdout),
2 usage errors and exceeded limits
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from instances.fileio import (
    format_instance,
    format_solution,
    read_instance,
    read_solution,
    write_instance,
    write_solution,
)
from instances.model import InstanceSpec, RandomInstanceParams
from instances.named import gen_paper
from instances.random_gen import instance_generator
from network.families import is_ring_family, is_uncrossable, stage_family, violated_cuts_for_augmentation
from network.feasibility import check_feasible
from network.graph import ScopeKind
from orchestrator import ALGORITHMS, orchestrator
from solvers.exact import exact_oracle
from solvers.flex_st import violated_family
from solvers.lp import cutting_plane_solve
from utils.errors import FlexNetError, InfeasibleInstanceError, PreconditionError
from utils.logging_setup import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2


def _emit_solution(solution, output: Optional[str]) -> None:
    if output:
        write_solution(solution, output)
    print(format_solution(solution), end="")


def cmd_solve(args) -> int:
    instance = read_instance(args.instance)
    solution, name = orchestrator.solve(
        instance, args.algorithm, seed=args.seed, staged=args.staged,
        best_effort=args.best_effort, root=args.root,
    )
    logger.info(f"{name} finished with cost {solution.cost}")
    _emit_solution(solution, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = read_instance(args.instance)
    solution = read_solution(args.solution, instance.graph)
    verdict = check_feasible(instance.graph, solution.edge_ids, instance.requirement)
    print(verdict.describe())
    return EXIT_OK if verdict else EXIT_VIOLATED


def cmd_opt(args) -> int:
    instance = read_instance(args.instance)
    _emit_solution(exact_oracle.opt_flex(instance.graph, instance.requirement), args.output)
    return EXIT_OK


def cmd_lp(args) -> int:
    instance = read_instance(args.instance)
    value, x = cutting_plane_solve(instance.graph, instance.requirement)
    print(f"lp {value:.9f}")
    if args.dump:
        for edge_id, v in sorted(x.values.items()):
            if v > 1e-9:
                print(f"x {edge_id} {v:.9f}")
    return EXIT_OK


def _random_params(args) -> RandomInstanceParams:
    fields = {
        "n": args.n,
        "extra_edges": args.extra_edges,
        "safe_probability": args.safe_prob,
        "cost_low": args.cost_low,
        "cost_high": args.cost_high,
        "cost_denominator": args.denominator,
        "p": args.p,
        "q": args.q,
        "scope": args.scope,
        "terminal_count": args.terminals,
    }
    return RandomInstanceParams(**{k: v for k, v in fields.items() if v is not None})


def cmd_gen(args) -> int:
    if args.name.lower() == "random":
        instance = instance_generator.generate(_random_params(args), args.seed)
    else:
        parameters = {}
        if args.k is not None:
            parameters["k"] = args.k
        if args.p is not None:
            parameters["p"] = args.p
        if args.extended:
            parameters["extended"] = True
        spec = InstanceSpec(name=args.name, parameters=parameters)
        instance = gen_paper(spec.name, **spec.parameters)
    if args.output:
        write_instance(instance, args.output)
    else:
        print(format_instance(instance), end="")
    return EXIT_OK


def cmd_check(args) -> int:
    instance = read_instance(args.instance)
    graph, req = instance.graph, instance.requirement
    F = read_solution(args.solution, graph).edge_ids if args.solution else graph.edge_ids

    if args.family == "augmentation":
        family = violated_cuts_for_augmentation(graph, F, req)
    elif args.family == "stage":
        if req.scope.kind is not ScopeKind.SPANNING or req.q < 1:
            raise PreconditionError("stage families need a spanning requirement with q >= 1")
        family = stage_family(graph, F, req.p, req.q - 1, args.stage)
    else:
        if req.scope.kind is not ScopeKind.PAIR:
            raise PreconditionError("flex-st families need a pair requirement")
        family = violated_family(graph, F, *req.scope.vertices)

    print(f"family {family.provenance}: {len(family)} cuts")
    for cut in family.cuts:
        print(f"cut {' '.join(map(str, cut.key))}")
    uncross = is_uncrossable(family)
    print(uncross.describe())
    print(is_ring_family(family).describe())
    return EXIT_OK if uncross else EXIT_VIOLATED


def _parse_seeds(text: str) -> List[int]:
    if ".." in text:
        low, high = text.split("..", 1)
        return list(range(int(low), int(high) + 1))
    return [int(s) for s in text.split(",")]


def cmd_ratio(args) -> int:
    if args.seeds:
        reports = orchestrator.run_batch(
            _random_params(args), _parse_seeds(args.seeds), args.algorithm, with_lp=not args.no_lp,
        )
        print(orchestrator.format_batch_summary(reports))
    else:
        if not args.instance:
            raise argparse.ArgumentTypeError("ratio needs an instance file or --seeds")
        reports = [orchestrator.evaluate(read_instance(args.instance), args.algorithm, seed=args.seed,
                                         with_lp=not args.no_lp)]
        print(orchestrator.format_results_for_display(reports[0]))
    if args.json:
        print(json.dumps(reports, indent=2, default=str))

    if any(r.get("status") != "success" for r in reports):
        return EXIT_USAGE
    broken = [r for r in reports if not r["feasible"] or r.get("within_factor") is False]
    return EXIT_VIOLATED if broken else EXIT_OK


def _add_random_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="Vertex count")
    parser.add_argument("--extra-edges", type=int, help="Edges beyond the spanning tree")
    parser.add_argument("--safe-prob", type=float, help="Probability an edge is safe")
    parser.add_argument("--cost-low", type=int, help="Smallest cost numerator")
    parser.add_argument("--cost-high", type=int, help="Largest cost numerator")
    parser.add_argument("--denominator", type=int, help="Cost denominator")
    parser.add_argument("--q", type=int, help="Requirement q")
    parser.add_argument("--scope", choices=["pair", "terminals", "spanning"], help="Requirement scope")
    parser.add_argument("--terminals", type=int, help="Terminal count for terminal scopes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flexnet", description="Flexible network design solvers")
    parser.add_argument("--log-level", help="Override FLEXNET_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Run an approximation algorithm")
    solve.add_argument("instance")
    solve.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    solve.add_argument("--seed", type=int, default=0, help="Steiner permutation seed")
    solve.add_argument("--root", type=int, help="Steiner root (default: smallest terminal)")
    solve.add_argument("--staged", action="store_true", help="Staged augmentation for p = 2")
    solve.add_argument("--best-effort", action="store_true", help="Allow FGC regimes without a guarantee")
    solve.add_argument("-o", "--output", help="Write the solution file here")
    solve.set_defaults(handler=cmd_solve)

    verify = sub.add_parser("verify", help="Check a solution file against its instance")
    verify.add_argument("instance")
    verify.add_argument("solution")
    verify.set_defaults(handler=cmd_verify)

    opt = sub.add_parser("opt", help="Exact optimum by branch-and-bound")
    opt.add_argument("instance")
    opt.add_argument("-o", "--output", help="Write the solution file here")
    opt.set_defaults(handler=cmd_opt)

    lp = sub.add_parser("lp", help="LP relaxation value by cutting planes")
    lp.add_argument("instance")
    lp.add_argument("--dump", action="store_true", help="Print the nonzero fractional values")
    lp.set_defaults(handler=cmd_lp)

    gen = sub.add_parser("gen", help="Generate a named or random instance")
    gen.add_argument("name", help="GAP, FIG-ST22, FIG-FGC32, FIG-FGC-P4ODD, FIG-FGC44 or random")
    gen.add_argument("--k", type=int, help="GAP size")
    gen.add_argument("--p", type=int, help="p for FIG-FGC-P4ODD or random instances")
    gen.add_argument("--extended", action="store_true", help="FIG-ST22 with spare edges")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", help="Write the instance file here")
    _add_random_options(gen)
    gen.set_defaults(handler=cmd_gen)

    check = sub.add_parser("check", help="Uncrossable and ring verdicts for an augmentation family")
    check.add_argument("instance")
    check.add_argument("--solution", help="Current edge set (default: all edges)")
    check.add_argument("--family", choices=["augmentation", "stage", "flex-st"], default="augmentation")
    check.add_argument("--stage", type=int, default=0, help="Safe-edge count for --family stage")
    check.set_defaults(handler=cmd_check)

    ratio = sub.add_parser("ratio", help="ALG/OPT and ALG/LP for an instance or a seed batch")
    ratio.add_argument("instance", nargs="?")
    ratio.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    ratio.add_argument("--seed", type=int, default=0)
    ratio.add_argument("--seeds", help="Random batch, e.g. 0..49 or 1,4,9")
    ratio.add_argument("--p", type=int, help="Requirement p for random batches")
    ratio.add_argument("--no-lp", action="store_true", help="Skip the LP relaxation")
    ratio.add_argument("--json", action="store_true", help="Also print the raw reports")
    _add_random_options(ratio)
    ratio.set_defaults(handler=cmd_ratio)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level)
    try:
        return args.handler(args)
    except InfeasibleInstanceError as e:
        print(f"INFEASIBLE {e}")
        if e.cut is not None:
            print(f"witness {' '.join(map(str, sorted(e.cut.members)))}")
        return EXIT_VIOLATED
    except (FlexNetError, ValidationError, argparse.ArgumentTypeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
