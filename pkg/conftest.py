"""
Shared fixtures: named instances and seeded random instances
"""
import numpy as np
import pytest

from instances.model import RandomInstanceParams
from instances.named import gen_paper
from instances.random_gen import instance_generator
from network.graph import FlexGraph


@pytest.fixture
def st22():
    return gen_paper("FIG-ST22")


@pytest.fixture
def st22_plus():
    return gen_paper("FIG-ST22", extended=True)


@pytest.fixture
def fgc32():
    return gen_paper("FIG-FGC32")


@pytest.fixture
def gap3():
    return gen_paper("GAP", k=3)


@pytest.fixture
def make_random():
    """Factory: make_random(seed, **params) -> feasible random Instance"""
    def make(seed: int, **params):
        return instance_generator.generate(RandomInstanceParams(**params), seed)
    return make


@pytest.fixture
def random_multigraph():
    """Factory: random_multigraph(seed, n, m) -> FlexGraph with mixed safety and integer costs"""
    def make(seed: int, n: int = 5, m: int = 9) -> FlexGraph:
        rng = np.random.default_rng(seed)
        edges = []
        for _ in range(m):
            u, v = rng.choice(n, size=2, replace=False)
            edges.append((int(u), int(v), int(rng.integers(1, 6)), "S" if rng.random() < 0.4 else "U"))
        return FlexGraph.build(n, edges)
    return make


@pytest.fixture
def pair_corpus(make_random):
    """Fifty random (2,2) pair instances: n = 8, 21 edges"""
    return [make_random(seed, n=8, extra_edges=14, p=2, q=2, scope="pair") for seed in range(50)]


@pytest.fixture
def spanning_corpus(make_random):
    """Factory: spanning_corpus(p, q) -> thirty random spanning instances, n = 6, 21 edges"""
    def make(p: int, q: int):
        return [make_random(seed, n=6, extra_edges=16, p=p, q=q, scope="spanning") for seed in range(30)]
    return make
