import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import formulas
from flowlab.cnf import (
    CnfFormula,
    PartialAssignment,
    Partition,
    block_assignments,
    combine,
    density_target,
    iter_clauses,
    literal_true,
    plan_partition,
    project,
    random_formula,
    satisfied_mask,
    satisfies,
    split_targets,
)


def test_literal_truth_table():
    assert [literal_true(l, v) for l in (3, -3) for v in (False, True)] == [False, True, True, False]


def test_satisfies_examples():
    on = PartialAssignment(1, (1,), 1)
    assert satisfies(on, (1,))
    assert not satisfies(on, (-1,))
    assert not satisfies(PartialAssignment(2, (2, 3), 3), (1,))
    assert not satisfies(on, ())


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(2, ((3,),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((0,),))
    with pytest.raises(ValueError):
        CnfFormula(0)
    f = CnfFormula(2, ((1, -1), (2,), ()))
    assert f.tautological == {0}
    assert f.count_satisfied((False, False)) == 1


def split_check(formula, partition):
    for values in itertools.product((False, True), repeat=formula.num_vars):
        parts = [project(values, partition, k) for k in range(3)]
        assert combine(formula.num_vars, *parts) == values
        for c in formula.clauses:
            direct = any(literal_true(l, values[abs(l) - 1]) for l in c)
            assert direct == any(satisfies(pa, c) for pa in parts)


def test_block_split_exhaustive():
    """Every clause over 4 variables, every block-size split."""
    clauses = tuple(iter_clauses(4, 4)) + ((),)
    formula = CnfFormula(4, clauses)
    for sizes in itertools.product(range(5), repeat=3):
        if sum(sizes) == 4:
            split_check(formula, Partition.from_sizes(4, sizes))
            split_check(formula, Partition.from_sizes(4, sizes, seed=sum(sizes) + sizes[0]))


@settings(max_examples=80, deadline=None)
@given(formulas())
def test_masks_combine_over_blocks(formula):
    rng = random.Random(formula.m)
    cut1 = rng.randint(0, formula.num_vars)
    cut2 = rng.randint(cut1, formula.num_vars)
    part = Partition.from_sizes(formula.num_vars, (cut1, cut2 - cut1, formula.num_vars - cut2), seed=formula.m)
    for values in itertools.product((False, True), repeat=formula.num_vars):
        mask = 0
        for k in range(3):
            mask |= satisfied_mask(project(values, part, k), formula)
        assert bin(mask).count("1") == formula.count_satisfied(values)


def test_iter_clauses_count():
    # 3 variables, width <= 3: 6 + 12 + 8
    assert len(list(iter_clauses(3, 3))) == 26
    assert all(not any(-l in c for l in c) for c in iter_clauses(3, 3))


def test_block_assignments_enumerate_all():
    part = Partition.from_sizes(5, (2, 3, 0))
    assert len(block_assignments(part, 0)) == 4
    assert len(block_assignments(part, 1)) == 8
    assert len(block_assignments(part, 2)) == 1
    assert block_assignments(part, 1)[5].values == {3: True, 4: False, 5: True}


@pytest.mark.parametrize(
    "c1, c2, n, sizes, targets",
    [
        (1, 1, 3, (1, 1, 1), (Fraction(1, 3), Fraction(1, 3))),
        (0, 0, 7, (0, 7, 0), (0, 0)),
        (1, 0, 10, (5, 5, 0), (Fraction(1, 2), 0)),
        (Fraction(1, 2), 1, 9, (1, 5, 3), (Fraction(1, 5), Fraction(2, 5))),
    ],
)
def test_plan_partition(c1, c2, n, sizes, targets):
    part = plan_partition(c1, c2, n)
    assert part.sizes == sizes
    assert part.targets == targets
    assert part.covers(n)


def test_plan_partition_shuffle_keeps_sizes():
    base = plan_partition(1, 1, 9)
    shuffled = plan_partition(1, 1, 9, seed=4)
    assert shuffled.sizes == base.sizes and shuffled.covers(9)
    assert shuffled.blocks != base.blocks


def test_targets():
    assert split_targets(1, 1) == (Fraction(1, 3), Fraction(1, 3))
    assert density_target(2) == Fraction(1, 3)
    assert density_target(1) == Fraction(1, 2)
    with pytest.raises(ValueError):
        split_targets(2, 0)
    with pytest.raises(ValueError):
        density_target(3)


def test_partition_guards():
    with pytest.raises(ValueError):
        Partition((1, 2), (2,), ())
    with pytest.raises(ValueError):
        Partition.from_sizes(3, (1, 1, 2))


def test_random_formula_reproducible():
    a = random_formula(9, 12, 3, random.Random(5))
    b = random_formula(9, 12, 3, random.Random(5))
    assert a == b and a.m == 12
    assert all(len(set(map(abs, c))) == 3 for c in a.clauses)
    with pytest.raises(ValueError):
        random_formula(0, 1, 1, random.Random(0))
