"""CNF formulas, variable partitions and partial assignments."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

Clause = tuple[int, ...]


def literal_true(lit: int, value: bool) -> bool:
    """Truth of literal ``lit`` when its variable holds ``value``."""
    return value if lit > 0 else not value


@dataclass(frozen=True)
class CnfFormula:
    """Formula over variables ``1..num_vars``; clauses are tuples of DIMACS literals.

    Duplicate clauses, empty clauses and tautological clauses are all allowed;
    the latter are reported by :attr:`tautological`.
    """

    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise ValueError("num_vars must be positive")
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for c in clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} outside 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def tautological(self) -> frozenset[int]:
        """Indices (0-based) of clauses holding some literal together with its negation."""
        return frozenset(i for i, c in enumerate(self.clauses) if any(-l in c for l in c))

    def count_satisfied(self, values: Sequence[bool]) -> int:
        """Clauses satisfied by a full assignment (``values[k]`` is variable ``k+1``)."""
        return sum(any(literal_true(l, values[abs(l) - 1]) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class PartialAssignment:
    """Truth values for the variables of one partition block.

    ``index`` encodes the values: bit ``k`` is the value of ``variables[k]``.
    """

    block: int
    variables: tuple[int, ...]
    index: int

    @property
    def values(self) -> dict[int, bool]:
        return {x: bool(self.index >> k & 1) for k, x in enumerate(self.variables)}


def satisfies(pa: PartialAssignment, clause: Sequence[int]) -> bool:
    """True iff ``pa`` sets some literal of ``clause`` true; variables outside the block are ignored."""
    vals = pa.values
    return any(abs(l) in vals and literal_true(l, vals[abs(l)]) for l in clause)


def satisfied_mask(pa: PartialAssignment, formula: CnfFormula) -> int:
    """Bitmask over clause indices (bit ``i`` is clause ``i``, 0-based) satisfied by ``pa``."""
    mask = 0
    for i, c in enumerate(formula.clauses):
        if satisfies(pa, c):
            mask |= 1 << i
    return mask


@dataclass(frozen=True)
class Partition:
    """Disjoint split of the variables into blocks ``U1``, ``U2``, ``U3``.

    ``targets`` holds the rational fractions ``(a, b)`` the sizes were derived from.
    """

    U1: tuple[int, ...]
    U2: tuple[int, ...]
    U3: tuple[int, ...]
    targets: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))

    def __post_init__(self) -> None:
        allv = self.U1 + self.U2 + self.U3
        if len(set(allv)) != len(allv):
            raise ValueError("partition blocks overlap")

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return (self.U1, self.U2, self.U3)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (len(self.U1), len(self.U2), len(self.U3))

    def covers(self, num_vars: int) -> bool:
        return sorted(self.U1 + self.U2 + self.U3) == list(range(1, num_vars + 1))

    @classmethod
    def from_sizes(
        cls,
        num_vars: int,
        sizes: tuple[int, int, int],
        seed: int | None = None,
        targets: tuple[Fraction, Fraction] | None = None,
    ) -> Partition:
        """Blocks by ascending variable index, or a seeded shuffle of the variables."""
        if sum(sizes) != num_vars or min(sizes) < 0:
            raise ValueError(f"sizes {sizes} do not split {num_vars} variables")
        order = list(range(1, num_vars + 1))
        if seed is not None:
            random.Random(seed).shuffle(order)
        a, u, _ = sizes
        blocks = (order[:a], order[a : a + u], order[a + u :])
        U1, U2, U3 = (tuple(sorted(b)) for b in blocks)
        if targets is None:
            targets = (Fraction(sizes[0], num_vars), Fraction(sizes[2], num_vars))
        return cls(U1, U2, U3, targets)


def split_targets(c1: Fraction, c2: Fraction) -> tuple[Fraction, Fraction]:
    """Block fractions ``(a, b)`` realizing |S| ~ n^c1, |T| ~ n^c2."""
    c1, c2 = Fraction(c1), Fraction(c2)
    if not (0 <= c1 <= 1 and 0 <= c2 <= 1):
        raise ValueError("c1 and c2 must lie in [0, 1]")
    return c1 / (1 + c1 + c2), c2 / (1 + c1 + c2)


def density_target(c: Fraction) -> Fraction:
    """Equal block fraction ``a = b`` giving edge density m ~ n^c for the all-pairs setting."""
    c = Fraction(c)
    if not 1 <= c <= 2:
        raise ValueError("c must lie in [1, 2]")
    return 1 / (c + 1)


def plan_partition(c1: Fraction, c2: Fraction, num_vars: int, seed: int | None = None) -> Partition:
    """|U1| = floor(a n), |U3| = floor(b n); U2 absorbs the rounding remainder."""
    a, b = split_targets(c1, c2)
    s1 = math.floor(a * num_vars)
    s3 = math.floor(b * num_vars)
    return Partition.from_sizes(num_vars, (s1, num_vars - s1 - s3, s3), seed=seed, targets=(a, b))


def block_assignments(partition: Partition, block: int) -> list[PartialAssignment]:
    variables = partition.blocks[block]
    return [PartialAssignment(block, variables, k) for k in range(1 << len(variables))]


def combine(num_vars: int, *parts: PartialAssignment) -> tuple[bool, ...]:
    """Full assignment from partial assignments; unassigned variables default to False."""
    values = [False] * num_vars
    for pa in parts:
        for x, v in pa.values.items():
            values[x - 1] = v
    return tuple(values)


def project(values: Sequence[bool], partition: Partition, block: int) -> PartialAssignment:
    variables = partition.blocks[block]
    index = sum(1 << k for k, x in enumerate(variables) if values[x - 1])
    return PartialAssignment(block, variables, index)


def random_formula(num_vars: int, num_clauses: int, width: int, rng: random.Random) -> CnfFormula:
    """Uniform random formula: each clause picks ``width`` distinct variables and random signs."""
    if num_vars < 1 or num_clauses < 0 or width < 1:
        raise ValueError("sizes must be positive")
    w = min(width, num_vars)
    clauses = []
    for _ in range(num_clauses):
        xs = rng.sample(range(1, num_vars + 1), w)
        clauses.append(tuple(x if rng.random() < 0.5 else -x for x in xs))
    return CnfFormula(num_vars, tuple(clauses))


def iter_clauses(num_vars: int, max_width: int) -> Iterator[Clause]:
    """Every non-empty, non-tautological clause of width <= ``max_width`` (variables ascending)."""
    for w in range(1, max_width + 1):
        for xs in combinations(range(1, num_vars + 1), w):
            for signs in product((1, -1), repeat=w):
                yield tuple(s * x for s, x in zip(signs, xs))
