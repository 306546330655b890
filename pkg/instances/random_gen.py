"""
Random instance generator
Connected random multigraphs (random spanning tree plus extra edges) with
independent per-edge safety and rational costs, regenerated until the
requested requirement is feasible on the full edge set
"""
import logging
from fractions import Fraction
from typing import Iterable, List, Optional

import numpy as np
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from config.settings import settings
from instances.model import Instance, RandomInstanceParams
from network.feasibility import check_feasible
from network.graph import FlexGraph, Requirement
from utils.errors import GenerationError, InfeasibleInstanceError

logger = logging.getLogger(__name__)


class InstanceGenerator:
    """
    Seeded random instances
    Attempt a of seed s draws from SeedSequence([s, a]), so every emitted
    instance is reproducible from (parameters, seed)
    """

    def __init__(self, attempt_cap: Optional[int] = None):
        self.attempt_cap = attempt_cap or settings.generator_attempt_cap
        logger.info(f"Instance generator initialized (attempt cap {self.attempt_cap})")

    def _draw(self, params: RandomInstanceParams, seed: int, attempt: int) -> Instance:
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        n = params.n

        pairs = []
        order = rng.permutation(n)
        for i in range(1, n):
            pairs.append((int(order[i]), int(order[rng.integers(0, i)])))
        for _ in range(params.extra_edges):
            u, v = rng.choice(n, size=2, replace=False)
            pairs.append((int(u), int(v)))

        low = params.cost_low * params.cost_denominator
        high = params.cost_high * params.cost_denominator
        edges = []
        for u, v in pairs:
            safety = "S" if rng.random() < params.safe_probability else "U"
            cost = Fraction(int(rng.integers(low, high + 1)), params.cost_denominator)
            edges.append((u, v, cost, safety))
        graph = FlexGraph.build(n, edges).canonical()

        if params.scope == "pair":
            requirement = Requirement.pair(params.p, params.q, 0, n - 1)
        elif params.scope == "terminals":
            count = params.terminal_count or min(3, n)
            terminals = sorted(int(v) for v in rng.choice(n, size=count, replace=False))
            requirement = Requirement.terminals(params.p, params.q, terminals)
        else:
            requirement = Requirement.spanning(params.p, params.q)

        verdict = check_feasible(graph, graph.edge_ids, requirement)
        if not verdict:
            raise InfeasibleInstanceError(f"Attempt {attempt}: {verdict.describe()}", cut=verdict.witness)

        parameters = params.model_dump()
        parameters.update(seed=seed, attempt=attempt)
        return Instance(graph, requirement, f"random-{params.scope}-n{n}-s{seed}", parameters)

    def generate(self, params: RandomInstanceParams, seed: int) -> Instance:
        """
        Draw a feasible random instance

        Args:
            params: Generator parameters
            seed: Base seed

        Returns:
            Instance whose full edge set satisfies the requirement
        """
        retrying = Retrying(
            stop=stop_after_attempt(self.attempt_cap),
            retry=retry_if_exception_type(InfeasibleInstanceError),
        )
        try:
            for attempt in retrying:
                with attempt:
                    instance = self._draw(params, seed, attempt.retry_state.attempt_number)
        except RetryError as exc:
            raise GenerationError(
                f"No feasible ({params.p},{params.q}) {params.scope} instance for seed {seed} "
                f"after {self.attempt_cap} attempts"
            ) from exc
        logger.debug(f"Generated {instance.name} on attempt {instance.parameters['attempt']}")
        return instance

    def batch(self, params: RandomInstanceParams, seeds: Iterable[int]) -> List[Instance]:
        return [self.generate(params, seed) for seed in seeds]


def gen_random(params: RandomInstanceParams, seed: int) -> Instance:
    """Module-level shortcut over the global generator"""
    return instance_generator.generate(params, seed)


# Global instance generator
instance_generator = InstanceGenerator()
