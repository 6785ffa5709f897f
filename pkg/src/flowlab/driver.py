"""MAX-CNF-SAT through flow queries on the gadgets, checked against exhaustive search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import flow
from .cnf import CnfFormula, PartialAssignment, Partition, combine
from .gadgets import (
    GadgetGraph,
    build_gadget,
    build_mlec_gadget,
    expected_counts,
    mlec_partition,
    subgadget,
    triple_satisfied,
    witness_cut_cap,
    witness_flow_cap,
    witness_flow_uncap,
)
from .multipair import st_max_flow
from .network import flow_violations

BRUTE_FORCE_VAR_LIMIT = 24

Tamper = Callable[[GadgetGraph], GadgetGraph]


@dataclass(frozen=True)
class MaxSatResult:
    best_p: int
    assignment: tuple[bool, ...]
    triple: tuple[int, ...] | None = None


def brute_force_max_sat(formula: CnfFormula) -> MaxSatResult:
    """Maximum number of satisfiable clauses by evaluating all 2^n assignments.

    Bit ``k`` of an assignment's index is variable ``k+1``; the witness is the
    lowest-index maximizer.
    """
    n = formula.num_vars
    if n > BRUTE_FORCE_VAR_LIMIT:
        raise ValueError(f"exhaustive search is limited to {BRUTE_FORCE_VAR_LIMIT} variables")
    idx = np.arange(1 << n, dtype=np.int64)
    bits = {x: ((idx >> (x - 1)) & 1).astype(bool) for x in range(1, n + 1)}
    count = np.zeros(1 << n, dtype=np.int64)
    for clause in formula.clauses:
        hit = np.zeros(1 << n, dtype=bool)
        for lit in clause:
            hit |= bits[abs(lit)] if lit > 0 else ~bits[abs(lit)]
        count += hit
    best = int(np.argmax(count))
    values = tuple(bool(best >> k & 1) for k in range(n))
    return MaxSatResult(int(count[best]), values)


def flow_threshold(partition: Partition, m: int) -> int:
    """Largest alpha->gamma flow value that still signals a p-satisfying triple."""
    return (1 << len(partition.U2)) * m - 1


def _gadget(formula, partition, p, variant, tamper):
    g = build_gadget(variant, formula, partition, p)
    return tamper(g) if tamper else g


def decide_threshold(
    formula: CnfFormula, partition: Partition, p: int, variant: str, tamper: Tamper | None = None
) -> tuple[bool, tuple[int, int] | None]:
    """One ST query on ``G_p``: is some (alpha, gamma) flow at most ``2^|U2| m - 1``?

    Returns the lexicographically smallest such pair of assignment indices.
    """
    if variant not in ("uncap", "cap"):
        raise ValueError("threshold decisions use the uncap or cap gadget")
    return _low_pair(_gadget(formula, partition, p, variant, tamper))


def _low_pair(g: GadgetGraph) -> tuple[bool, tuple[int, int] | None]:
    matrix = st_max_flow(g.net, g.sources, g.sinks)
    limit = flow_threshold(g.partition, g.formula.m)
    for a, row in enumerate(matrix.values):
        for c, x in enumerate(row):
            if x <= limit:
                return True, (a, c)
    return False, None


def recover_triple(
    formula: CnfFormula, partition: Partition, p: int, alpha: int, gamma: int, variant: str
) -> int:
    """Middle-block assignment completing ``(alpha, gamma)`` to a triple satisfying >= p clauses.

    For the uncap gadget the search looks for a sub-gadget whose flow falls
    below ``m``; every candidate is confirmed directly against the formula.
    """
    g = build_gadget(variant, formula, partition, p)
    m = formula.m
    for beta in range(1 << len(partition.U2)):
        if variant == "uncap":
            sub = subgadget(g, alpha, beta, gamma)
            s, t = sub.node("alpha", alpha), sub.node("gamma", gamma)
            if flow.max_flow_value(sub.net, s, t) > m - 1:
                continue
        if triple_satisfied(g, alpha, beta, gamma) >= p:
            return beta
    raise RuntimeError(f"no middle assignment completes ({alpha}, {gamma}) to {p} satisfied clauses")


def _triple_assignment(formula: CnfFormula, partition: Partition, *indices: int) -> tuple[bool, ...]:
    parts = [PartialAssignment(k, partition.blocks[k], x) for k, x in enumerate(indices)]
    return combine(formula.num_vars, *parts)


def max_sat_via_flow(
    formula: CnfFormula, partition: Partition, variant: str, search: str = "binary"
) -> MaxSatResult:
    """Largest ``p`` whose gadget exposes a low-flow pair, plus the recovered witness triple.

    ``search="binary"`` relies on monotonicity in ``p``; ``"linear"`` scans every ``p``.
    """
    m = formula.m
    found: dict[int, tuple[int, int]] = {}

    def test(p: int) -> bool:
        ok, pair = decide_threshold(formula, partition, p, variant)
        if ok:
            found[p] = pair
        return ok

    if search == "linear":
        best = 0
        for p in range(1, m + 1):
            if test(p):
                best = p
    elif search == "binary":
        lo, hi = 0, m  # test(lo) holds vacuously
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if test(mid):
                lo = mid
            else:
                hi = mid - 1
        best = lo
    else:
        raise ValueError(f"unknown search mode {search!r}")
    if best == 0:
        return MaxSatResult(0, (False,) * formula.num_vars)
    a, c = found[best]
    b = recover_triple(formula, partition, best, a, c, variant)
    return MaxSatResult(best, _triple_assignment(formula, partition, a, b, c), (a, b, c))


def mlec_max_sat(formula: CnfFormula) -> MaxSatResult:
    """Maximum over (alpha, beta) node pairs of the edge-disjoint path count in the two-block gadget."""
    g = build_mlec_gadget(formula)
    matrix = st_max_flow(g.net, g.sources, g.sinks)
    best, (a, b) = max(
        ((x, (i, j)) for i, row in enumerate(matrix.values) for j, x in enumerate(row)),
        key=lambda e: (e[0], -e[1][0], -e[1][1]),
    )
    part = g.partition
    return MaxSatResult(best, _triple_assignment(formula, part, a, b), (a, b))


@dataclass
class ThresholdRecord:
    p: int
    observed: bool
    oracle: bool
    witness_ok: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.observed == self.oracle and self.witness_ok


@dataclass
class VerificationReport:
    variant: str
    records: list[ThresholdRecord]

    @property
    def passed(self) -> bool:
        return all(r.agree for r in self.records)

    def to_text(self) -> str:
        lines = ["p observed oracle agree"]
        for r in self.records:
            lines.append(f"{r.p} {int(r.observed)} {int(r.oracle)} {int(r.agree)}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


def _check_uncap_witnesses(g: GadgetGraph, rec: ThresholdRecord) -> None:
    """Sub-gadget threshold and two-phase witness flow for every triple."""
    m, p = g.formula.m, g.p
    sizes = [1 << len(b) for b in g.partition.blocks]
    for a in range(sizes[0]):
        for b in range(sizes[1]):
            for c in range(sizes[2]):
                sub = subgadget(g, a, b, c)
                s, t = sub.node("alpha", a), sub.node("gamma", c)
                value = flow.max_flow_value(sub.net, s, t)
                low = triple_satisfied(g, a, b, c) <= p - 1
                if (value == m) != low or value > m:
                    rec.witness_ok = False
                    rec.notes.append(f"sub-gadget ({a},{b},{c}) flow {value}")
                try:
                    wf = witness_flow_uncap(g, a, b, c)
                except ValueError as exc:
                    rec.witness_ok = False
                    rec.notes.append(str(exc))
                    continue
                bad = flow_violations(sub.net, s, t, wf.edge_flows, wf.value)
                if bad or (low and wf.value != m) or wf.value > value:
                    rec.witness_ok = False
                    rec.notes.append(f"witness flow ({a},{b},{c}) value {wf.value}: {bad[:1]}")


def _check_cap_witnesses(g: GadgetGraph, rec: ThresholdRecord, satisfying: tuple[bool, ...] | None) -> None:
    m = g.formula.m
    width = 1 << len(g.partition.U2)
    if satisfying is not None:
        S = witness_cut_cap(g, satisfying)
        a = g.node("alpha", _index(satisfying, g.partition.U1))
        c = g.node("gamma", _index(satisfying, g.partition.U3))
        cap = flow.cut_capacity(g.net, S)
        if not (a in S and c not in S and cap <= width * m - 1):
            rec.witness_ok = False
            rec.notes.append(f"witness cut capacity {cap}")
        return
    for a in range(1 << len(g.partition.U1)):
        for c in range(1 << len(g.partition.U3)):
            s, t = g.node("alpha", a), g.node("gamma", c)
            try:
                wf = witness_flow_cap(g, a, c)
            except ValueError as exc:
                rec.witness_ok = False
                rec.notes.append(str(exc))
                continue
            bad = flow_violations(g.net, s, t, wf.edge_flows, wf.value)
            if bad or wf.value != width * m:
                rec.witness_ok = False
                rec.notes.append(f"witness flow ({a},{c}): {bad[:1]}")


def _index(values: tuple[bool, ...], block: tuple[int, ...]) -> int:
    return sum(1 << k for k, x in enumerate(block) if values[x - 1])


def verify_lemma(
    formula: CnfFormula,
    partition: Partition,
    variant: str,
    tamper: Tamper | None = None,
    witnesses: bool = True,
) -> VerificationReport:
    """Compare the gadget threshold with exhaustive search at every ``p`` in ``1..m``.

    Each record also compares the gadget's node and edge counts with their
    closed forms.  With ``witnesses`` set, it checks the constructive side too:
    uncap -- every sub-gadget flow and two-phase witness flow;
    cap -- the explicit cut when ``p`` clauses are satisfiable, the explicit
    full-value flow for every pair otherwise.
    """
    oracle = brute_force_max_sat(formula)
    records = []
    mlec_best = mlec_max_sat(formula).best_p if variant == "mlec" and formula.m else None
    for p in range(1, formula.m + 1):
        truth = oracle.best_p >= p
        if variant == "mlec":
            records.append(ThresholdRecord(p, mlec_best >= p, truth))
            continue
        g = _gadget(formula, partition, p, variant, tamper)
        observed, _ = _low_pair(g)
        rec = ThresholdRecord(p, observed, truth)
        counts = expected_counts(variant, formula, partition, p)
        if (g.net.node_count, g.net.edge_count) != (counts.nodes, counts.edges):
            rec.witness_ok = False
            rec.notes.append(f"gadget has {g.net.node_count} nodes / {g.net.edge_count} edges, "
                             f"closed form gives {counts.nodes} / {counts.edges}")
        if witnesses:
            if variant == "uncap":
                _check_uncap_witnesses(g, rec)
            else:
                _check_cap_witnesses(g, rec, oracle.assignment if truth else None)
        records.append(rec)
    return VerificationReport(variant, records)
