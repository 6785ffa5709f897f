from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from flowlab.cnf import CnfFormula, Partition, iter_clauses, plan_partition, random_formula
from flowlab.network import FlowNetwork

# Caption patterns with x1 in U1, x2 in U2, x3 in U3; assignment index 0 means
# the variable is False.
#   uncap: alpha=(x1=F) satisfies nothing, beta=(x2=F) satisfies C2,C3,
#          beta~=(x2=T) satisfies C1, gamma~=(x3=T) satisfies C1.
#   cap:   alpha=(x1=F) satisfies C3, beta=(x2=F) satisfies C1,
#          beta~=(x2=T) satisfies C3, gamma~=(x3=T) satisfies C2.
UNCAP_SAMPLE = CnfFormula(3, ((2, 3), (-2,), (1, -2)))
CAP_SAMPLE = CnfFormula(3, ((-2,), (3,), (-1, 2)))
ALPHA, BETA, BETA_T, GAMMA_T = 0, 0, 1, 1
SPLIT_111 = Partition.from_sizes(3, (1, 1, 1))


def random_network(rng: random.Random, max_nodes: int = 8, max_cap: int = 5, density: float = 0.35) -> FlowNetwork:
    n = rng.randint(2, max_nodes)
    edges = []
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                edges.append((u, v, rng.randint(1, max_cap)))
    # occasional parallel edges
    for _ in range(rng.randint(0, 2)):
        if edges:
            u, v, _ = rng.choice(edges)
            edges.append((u, v, rng.randint(1, max_cap)))
    return FlowNetwork(n, tuple(edges))


def random_undirected(rng: random.Random, max_nodes: int = 30, max_cap: int = 9) -> FlowNetwork:
    n = rng.randint(2, max_nodes)
    density = rng.uniform(0.05, 0.4)
    edges = [(u, v, rng.randint(1, max_cap)) for u in range(n) for v in range(u + 1, n) if rng.random() < density]
    return FlowNetwork(n, tuple(edges), undirected=True)


@st.composite
def networks(draw, max_nodes: int = 7, max_cap: int = 5) -> FlowNetwork:
    n = draw(st.integers(2, max_nodes))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    raw = draw(st.lists(st.tuples(pairs, st.integers(1, max_cap)), max_size=3 * n))
    return FlowNetwork(n, tuple((u, v, c) for (u, v), c in raw))


@st.composite
def formulas(draw, max_vars: int = 5, max_clauses: int = 5) -> CnfFormula:
    n = draw(st.integers(1, max_vars))
    lit = st.integers(1, n).flatmap(lambda x: st.sampled_from((x, -x)))
    clauses = draw(st.lists(st.lists(lit, min_size=0, max_size=3).map(tuple), max_size=max_clauses))
    return CnfFormula(n, tuple(clauses))


def exhaustive_corpus() -> list[CnfFormula]:
    """Every formula over 3 variables with at most 3 non-empty, non-tautological
    clauses of width <= 3, one representative per clause multiset."""
    clauses = list(iter_clauses(3, 3))
    return [
        CnfFormula(3, combo)
        for k in range(4)
        for combo in itertools.combinations_with_replacement(clauses, k)
    ]


def adversarial_corpus() -> list[CnfFormula]:
    return [
        CnfFormula(3, ()),
        CnfFormula(3, ((),)),
        CnfFormula(3, ((), (1,), ())),
        CnfFormula(3, ((1, -1),)),
        CnfFormula(3, ((1, -1), (2,), (-2,))),
        CnfFormula(3, ((1, 2), (1, 2), (1, 2))),
        CnfFormula(3, ((1,), (-1,), (1,), (-1,))),
        CnfFormula(3, ((2, -2, 3), (), (-3,), (3,))),
        CnfFormula(3, ((1, 1, 2), (-3, -3))),
        CnfFormula(3, ((1,), (2,), (3,), (-1, -2, -3))),
    ]


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


SPLITS = ((1, 1), (1, 0), (0, 1), (Fraction(1, 2), Fraction(1, 2)), (0, 0))


def random_corpus(count: int = 200, seed: int = 2024) -> list[tuple[CnfFormula, Partition]]:
    """Seeded formulas with n <= 9, m <= 12 paired with partitions cycling through
    several (c1, c2) splits; odd entries use a shuffled variable placement."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(2, 9)
        f = random_formula(n, rng.randint(1, 12), rng.randint(1, 3), rng)
        c1, c2 = SPLITS[k % len(SPLITS)]
        out.append((f, plan_partition(c1, c2, n, seed=k if k % 2 else None)))
    return out
