"""
Orchestrator - Main solver coordinator
Runs the solve / verify / optimum / LP workflow for one instance and
collects approximation-ratio reports, one instance or a seed batch at a time
"""
import logging
import json
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Dict, Any, Iterable, Optional, Tuple
from pathlib import Path
from datetime import datetime

from config.settings import settings
from instances.model import Instance, RandomInstanceParams
from instances.random_gen import instance_generator
from network.feasibility import check_feasible
from network.graph import ScopeKind, Solution
from solvers.exact import exact_oracle
from solvers.fgc import solve_fgc
from solvers.flex_st import solve_22
from solvers.lp import cutting_plane_solve
from solvers.steiner import solve_rooted_steiner
from utils.errors import FlexNetError, InvariantViolation, UnsupportedRegimeError
from utils.run_tracer import run_tracer

logger = logging.getLogger(__name__)

ALGORITHMS = ("auto", "flex-st", "fgc", "steiner", "exact")
FLEX_ST_FACTOR = 5


class FlexNetOrchestrator:
    """
    Main orchestrator that coordinates the solvers
    Workflow:
    1. Solve the instance with the selected algorithm
    2. Verify the output against the requirement
    3. Compute the exact optimum (desk scale)
    4. Compute the LP relaxation value
    5. Report ALG/OPT and ALG/LP
    """

    def __init__(self):
        self.cache_dir = Path(settings.results_dir)
        self.max_workers = settings.max_workers
        logger.info("FlexNet Orchestrator initialized")

    def resolve_algorithm(self, instance: Instance, algorithm: str = "auto") -> str:
        """Map 'auto' to the solver matching the instance's scope and levels"""
        if algorithm not in ALGORITHMS:
            raise UnsupportedRegimeError(f"Unknown algorithm {algorithm!r} (choose from {', '.join(ALGORITHMS)})")
        if algorithm != "auto":
            return algorithm
        req = instance.requirement
        if req.scope.kind is ScopeKind.SPANNING:
            return "fgc"
        if (req.p, req.q) == (2, 2):
            return "flex-st" if req.scope.kind is ScopeKind.PAIR else "steiner"
        logger.warning(f"No approximation algorithm for {req}; falling back to the exact oracle")
        return "exact"

    def solve(
        self,
        instance: Instance,
        algorithm: str = "auto",
        seed: int = 0,
        staged: bool = False,
        best_effort: bool = False,
        root: Optional[int] = None
    ) -> Tuple[Solution, str]:
        """
        Run one solver on an instance

        Args:
            instance: Graph and requirement
            algorithm: One of ALGORITHMS
            seed: Permutation seed for the Steiner solver
            staged: Staged augmentation for p = 2 FGC
            best_effort: Allow FGC regimes without a guarantee
            root: Steiner root (default: smallest terminal)

        Returns:
            (Solution, resolved algorithm name)
        """
        name = self.resolve_algorithm(instance, algorithm)
        graph, req = instance.graph, instance.requirement

        if name == "exact":
            return exact_oracle.opt_flex(graph, req), name
        if name == "fgc":
            if req.scope.kind is not ScopeKind.SPANNING:
                raise UnsupportedRegimeError(f"fgc needs a spanning requirement, got {req.scope}")
            return solve_fgc(graph, req.p, req.q, staged=staged, best_effort=best_effort), name
        if name == "flex-st":
            if req.scope.kind is not ScopeKind.PAIR or (req.p, req.q) != (2, 2):
                raise UnsupportedRegimeError(f"flex-st solves (2,2) pair requirements, got {req}")
            s, t = req.scope.vertices
            return solve_22(graph, s, t), name

        if req.scope.kind is ScopeKind.SPANNING:
            raise UnsupportedRegimeError("steiner needs a pair or terminal requirement")
        terminals = list(req.scope.vertices)
        r = terminals[0] if root is None else root
        return solve_rooted_steiner(graph, terminals, r, req.p, req.q, seed), name

    def evaluate(
        self,
        instance: Instance,
        algorithm: str = "auto",
        seed: int = 0,
        with_opt: bool = True,
        with_lp: bool = True,
        **options
    ) -> Dict[str, Any]:
        """
        Main entry point - solve, verify and compare against OPT and LP

        Args:
            instance: Graph and requirement
            algorithm: One of ALGORITHMS
            seed: Steiner permutation seed
            with_opt: Compute the exact optimum
            with_lp: Compute the LP relaxation value
            **options: Passed to solve()

        Returns:
            Report dictionary
        """
        logger.info("=" * 80)
        logger.info(f"Evaluating {instance.name}: {instance.requirement}")
        logger.info("=" * 80)

        report: Dict[str, Any] = {
            "instance": instance.summary(),
            "algorithm": algorithm,
            "seed": seed,
            "timestamp": datetime.now().isoformat(),
            "timings": {},
        }
        try:
            # Step 1: Solve
            started = time.perf_counter()
            solution, name = self.solve(instance, algorithm, seed=seed, **options)
            report["timings"]["solve"] = time.perf_counter() - started
            report["algorithm"] = name
            report["solution"] = solution.to_dict()
            report["factor"] = self._factor(name, solution)

            # Step 2: Verify
            verdict = check_feasible(instance.graph, solution.edge_ids, instance.requirement)
            report["feasible"] = verdict.feasible
            report["verdict"] = verdict.describe()

            # Step 3: Exact optimum
            if with_opt:
                started = time.perf_counter()
                optimum = exact_oracle.opt_flex(instance.graph, instance.requirement)
                report["timings"]["opt"] = time.perf_counter() - started
                report["optimum"] = str(optimum.cost)
                report["ratio_opt"] = float(solution.cost / optimum.cost) if optimum.cost else 1.0
                if report["factor"] is not None:
                    report["within_factor"] = solution.cost <= report["factor"] * optimum.cost

            # Step 4: LP relaxation
            if with_lp and instance.requirement.p >= 1:
                started = time.perf_counter()
                lp_value, _ = cutting_plane_solve(instance.graph, instance.requirement)
                report["timings"]["lp"] = time.perf_counter() - started
                report["lp_value"] = lp_value
                report["ratio_lp"] = float(solution.cost) / lp_value if lp_value > 1e-9 else None

            report["status"] = "success"
        except InvariantViolation:
            raise
        except FlexNetError as e:
            logger.error(f"Evaluation of {instance.name} failed: {e}")
            report["status"] = "error"
            report["message"] = f"{type(e).__name__}: {e}"
            run_tracer.log_error(report["algorithm"], instance.name, report["message"], {"seed": seed})
            return report

        run_tracer.log_run(report["algorithm"], instance.name, {
            "cost": report["solution"]["cost"],
            "ratio_opt": report.get("ratio_opt"),
            "ratio_lp": report.get("ratio_lp"),
        }, {"seed": seed, "timings": report["timings"]})

        # Cache results
        if settings.cache_results:
            self._cache_results(report, instance.name)

        logger.info("=" * 80)
        logger.info(f"Evaluation completed: ratio_opt={report.get('ratio_opt')}, ratio_lp={report.get('ratio_lp')}")
        logger.info("=" * 80)
        return report

    def _factor(self, name: str, solution: Solution) -> Optional[int]:
        if name == "flex-st":
            return FLEX_ST_FACTOR
        if name == "fgc":
            return solution.meta.get("factor")
        if name == "exact":
            return 1
        return None

    def run_batch(
        self,
        params: RandomInstanceParams,
        seeds: Iterable[int],
        algorithm: str = "auto",
        with_lp: bool = False,
        max_workers: Optional[int] = None
    ) -> List[Dict[str, Any]]:
        """
        Evaluate one random instance per seed in a process pool

        Args:
            params: Random instance parameters
            seeds: Instance seeds (also used as Steiner seeds)
            algorithm: One of ALGORITHMS
            with_lp: Compute LP values too
            max_workers: Pool size (default: settings.max_workers)

        Returns:
            Reports in seed order
        """
        jobs = [(params.model_dump(), seed, algorithm, with_lp) for seed in seeds]
        workers = max_workers or self.max_workers
        logger.info(f"Running {len(jobs)} seeds on {workers} workers")
        if workers <= 1:
            return [_evaluate_seed(job) for job in jobs]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate_seed, jobs))

    def _cache_results(self, results: Dict[str, Any], name: str):
        """Cache results to file"""
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        safe_name = "".join(c if c.isalnum() or c in "-_" else "_" for c in name)
        cache_file = self.cache_dir / f"{safe_name}_{timestamp}.json"

        with open(cache_file, 'w') as f:
            json.dump(results, f, indent=2, default=str)

        logger.info(f"Results cached to {cache_file}")

    def format_results_for_display(self, results: Dict[str, Any]) -> str:
        """
        Format a report in a human-readable way

        Args:
            results: Report from evaluate()

        Returns:
            Formatted string
        """
        if results.get("status") == "error":
            return f"Error: {results.get('message')}"

        info = results["instance"]
        output = []
        output.append("=" * 80)
        output.append("FLEXNET RESULTS")
        output.append("=" * 80)
        output.append(f"Instance: {info['name']} ({info['vertices']} vertices, {info['edges']} edges)")
        output.append(f"Requirement: {info['requirement']}")
        output.append(f"Algorithm: {results['algorithm']}")
        output.append(f"Timestamp: {results.get('timestamp')}")
        output.append("")
        output.append(f"Cost: {results['solution']['cost']}")
        output.append(f"Edges: {results['solution']['edge_ids']}")
        output.append(f"Verdict: {results['verdict']}")
        if "optimum" in results:
            output.append(f"Optimum: {results['optimum']}  (ALG/OPT = {results['ratio_opt']:.4f})")
        if results.get("factor") is not None and "within_factor" in results:
            output.append(f"Guarantee: {results['factor']}x  (held: {results['within_factor']})")
        if results.get("lp_value") is not None:
            ratio = results.get("ratio_lp")
            shown = f"{ratio:.4f}" if ratio is not None else "n/a"
            output.append(f"LP value: {results['lp_value']:.6f}  (ALG/LP = {shown})")
        output.append("=" * 80)
        return "\n".join(output)

    def format_batch_summary(self, reports: List[Dict[str, Any]]) -> str:
        """One line per seed plus the worst ratio"""
        output = ["=" * 80, "BATCH RESULTS", "=" * 80]
        worst = None
        for report in reports:
            if report.get("status") != "success":
                output.append(f"seed {report.get('seed')}: ERROR {report.get('message')}")
                continue
            ratio = report.get("ratio_opt")
            if ratio is not None and (worst is None or ratio > worst):
                worst = ratio
            output.append(
                f"seed {report['seed']}: cost {report['solution']['cost']}, "
                f"opt {report.get('optimum')}, ratio {ratio}, feasible {report['feasible']}"
            )
        output.append("=" * 80)
        output.append(f"Worst ALG/OPT: {worst}")
        return "\n".join(output)


def _evaluate_seed(job: Tuple[Dict[str, Any], int, str, bool]) -> Dict[str, Any]:
    params, seed, algorithm, with_lp = job
    try:
        instance = instance_generator.generate(RandomInstanceParams(**params), seed)
    except FlexNetError as e:
        return {"status": "error", "seed": seed, "message": f"{type(e).__name__}: {e}"}
    return orchestrator.evaluate(instance, algorithm, seed=seed, with_lp=with_lp)


# Global orchestrator instance
orchestrator = FlexNetOrchestrator()
