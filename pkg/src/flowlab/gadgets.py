"""Flow networks whose pairwise max-flow values encode MAX-CNF-SAT.

Three constructions are provided:

* ``uncap`` -- unit-capacity gadget ``G_p``.  Every assignment ``beta`` to the
  middle block owns a private family of nodes; the flow from ``alpha`` to
  ``gamma`` is ``2^|U2| * m`` unless some triple satisfies ``p`` clauses.
* ``cap`` -- capacitated gadget with shared clause nodes and a hub ``v_B``;
  same threshold, but only ``O(N)`` edges.
* ``mlec`` -- two-block unit gadget where the number of edge-disjoint
  ``alpha -> beta`` paths equals the clauses satisfied by ``alpha u beta``.

Nodes carry :class:`Role` labels and gadget edges a ``blue``/``red`` color.
Assignment indices are 0-based (see :class:`~flowlab.cnf.PartialAssignment`);
clause indices ``i`` and hub-fanout indices ``j`` are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .cnf import CnfFormula, Partition, block_assignments, project, satisfied_mask
from .network import FlowNetwork, FlowResult

BLUE, RED = "blue", "red"
VARIANTS = ("uncap", "cap", "mlec")
MAX_BLOCK_BITS = 20


class GadgetTooLarge(ValueError):
    pass


class Role(NamedTuple):
    kind: str
    args: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.kind}({','.join(map(str, self.args))})"

    @classmethod
    def parse(cls, text: str) -> Role:
        kind, _, rest = text.partition("(")
        if not rest.endswith(")"):
            raise ValueError(f"malformed role label {text!r}")
        inner = rest[:-1]
        return cls(kind, tuple(int(x) for x in inner.split(",")) if inner else ())


@dataclass(frozen=True)
class GadgetGraph:
    net: FlowNetwork
    roles: tuple[Role, ...]
    colors: tuple[str | None, ...]
    variant: str
    p: int | None
    partition: Partition
    formula: CnfFormula

    def __post_init__(self) -> None:
        if len(self.roles) != self.net.node_count:
            raise ValueError("every node needs exactly one role")
        if len(set(self.roles)) != len(self.roles):
            raise ValueError("role labels must be unique")
        if len(self.colors) != self.net.edge_count:
            raise ValueError("every edge needs a color slot")

    @cached_property
    def node_of(self) -> dict[Role, int]:
        return {r: v for v, r in enumerate(self.roles)}

    @cached_property
    def edge_of(self) -> dict[tuple[int, int], int]:
        index: dict[tuple[int, int], int] = {}
        for e, (u, v, _) in enumerate(self.net.edges):
            index.setdefault((u, v), e)
        return index

    @cached_property
    def tables(self) -> _Tables:
        return _tables(self.formula, self.partition)

    def node(self, kind: str, *args: int) -> int:
        return self.node_of[Role(kind, args)]

    def nodes_of_kind(self, kind: str) -> list[int]:
        return [v for v, r in enumerate(self.roles) if r.kind == kind]

    @property
    def sources(self) -> list[int]:
        return self.nodes_of_kind("alpha")

    @property
    def sinks(self) -> list[int]:
        return self.nodes_of_kind("beta" if self.variant == "mlec" else "gamma")

    def replace_net(self, net: FlowNetwork, colors: Sequence[str | None] | None = None) -> GadgetGraph:
        """Same labels on a modified edge set (used for fault injection)."""
        if colors is None:
            colors = tuple(self.colors[: net.edge_count]) + (None,) * max(0, net.edge_count - len(self.colors))
        return GadgetGraph(net, self.roles, tuple(colors), self.variant, self.p, self.partition, self.formula)


class _Tables(NamedTuple):
    m: int
    full: int
    alpha: list[int]
    beta: list[int]
    gamma: list[int]


def _tables(formula: CnfFormula, partition: Partition) -> _Tables:
    if not partition.covers(formula.num_vars):
        raise ValueError("partition does not cover the formula's variables")
    for block in partition.blocks:
        if len(block) > MAX_BLOCK_BITS:
            raise GadgetTooLarge(f"block of {len(block)} variables exceeds 2^{MAX_BLOCK_BITS} assignments")
    masks = [[satisfied_mask(pa, formula) for pa in block_assignments(partition, k)] for k in range(3)]
    return _Tables(formula.m, (1 << formula.m) - 1, *masks)


def _check_p(p: int, m: int) -> None:
    if not 1 <= p <= m:
        raise ValueError(f"p must lie in 1..{m}, got {p}")


class _Assembler:
    def __init__(self) -> None:
        self.roles: list[Role] = []
        self.edges: list[tuple[int, int, int]] = []
        self.colors: list[str | None] = []

    def node(self, kind: str, *args: int) -> int:
        self.roles.append(Role(kind, args))
        return len(self.roles) - 1

    def edge(self, u: int, v: int, cap: int, color: str | None) -> None:
        self.edges.append((u, v, cap))
        self.colors.append(color)

    def finish(self, variant, p, partition, formula) -> GadgetGraph:
        net = FlowNetwork(len(self.roles), tuple(self.edges))
        return GadgetGraph(net, tuple(self.roles), tuple(self.colors), variant, p, partition, formula)


def build_uncap_gadget(formula: CnfFormula, partition: Partition, p: int) -> GadgetGraph:
    tb = _tables(formula, partition)
    m = tb.m
    _check_p(p, m)
    g = _Assembler()
    alphas = [g.node("alpha", a) for a in range(len(tb.alpha))]
    fam = []
    for b in range(len(tb.beta)):
        left = [g.node("beta_l", b, i) for i in range(1, m + 1)]
        right = [g.node("beta_r", b, i) for i in range(1, m + 1)]
        prime = g.node("beta_prime", b)
        fan = [g.node("beta_prime_j", b, j) for j in range(1, p)]
        fam.append((left, right, prime, fan))
    gammas = [g.node("gamma", c) for c in range(len(tb.gamma))]

    for a, am in zip(alphas, tb.alpha):
        for (left, right, _, _), bm in zip(fam, tb.beta):
            sat = am | bm
            for i in range(m):
                if sat >> i & 1:
                    g.edge(a, right[i], 1, RED)
                else:
                    g.edge(a, left[i], 1, BLUE)
    for left, _, _, _ in fam:
        for i in range(m):
            for c, cm in zip(gammas, tb.gamma):
                if not cm >> i & 1:
                    g.edge(left[i], c, 1, BLUE)
    for _, _, _, fan in fam:
        for x in fan:
            for c in gammas:
                g.edge(x, c, 1, RED)
    for left, right, prime, fan in fam:
        for i in range(m):
            g.edge(left[i], right[i], 1, RED)
            g.edge(right[i], prime, 1, RED)
        for x in fan:
            g.edge(prime, x, 1, RED)
    return g.finish("uncap", p, partition, formula)


def build_cap_gadget(formula: CnfFormula, partition: Partition, p: int) -> GadgetGraph:
    tb = _tables(formula, partition)
    m = tb.m
    _check_p(p, m)
    width = len(tb.beta)  # 2^|U2|, capacity of the alpha and clause->gamma edges
    g = _Assembler()
    alphas = [g.node("alpha", a) for a in range(len(tb.alpha))]
    fam = []
    for b in range(width):
        left = [g.node("beta_l", b, i) for i in range(1, m + 1)]
        centre = [g.node("beta_c", b, i) for i in range(1, m + 1)]
        right = [g.node("beta_r", b, i) for i in range(1, m + 1)]
        fam.append((left, centre, right, g.node("beta_prime", b)))
    gammas = [g.node("gamma", c) for c in range(len(tb.gamma))]
    sat_node, unsat_node = [], []
    for i in range(1, m + 1):
        sat_node.append(g.node("clause_sat", i))
        unsat_node.append(g.node("clause_unsat", i))
    clause = [g.node("clause", i) for i in range(1, m + 1)]
    hub = g.node("hub")

    for a, am in zip(alphas, tb.alpha):
        for i in range(m):
            if am >> i & 1:
                g.edge(a, sat_node[i], width, RED)
            else:
                g.edge(a, unsat_node[i], width, BLUE)
    for (left, centre, right, prime), bm in zip(fam, tb.beta):
        for i in range(m):
            g.edge(sat_node[i], centre[i], 1, RED)
            g.edge(unsat_node[i], left[i], 1, BLUE)
            if not bm >> i & 1:
                g.edge(left[i], right[i], 1, BLUE)
            g.edge(left[i], centre[i], 1, RED)
            g.edge(centre[i], prime, 1, RED)
            g.edge(right[i], clause[i], 1, BLUE)
    if p > 1:
        for _, _, _, prime in fam:
            g.edge(prime, hub, p - 1, RED)
        for c in gammas:
            g.edge(hub, c, width * (p - 1), RED)
    for c, cm in zip(gammas, tb.gamma):
        for i in range(m):
            if not cm >> i & 1:
                g.edge(clause[i], c, width, BLUE)
    return g.finish("cap", p, partition, formula)


def mlec_partition(num_vars: int) -> Partition:
    """Halves of sizes ceil(n/2) and floor(n/2); the third block is empty."""
    half = (num_vars + 1) // 2
    return Partition.from_sizes(num_vars, (half, num_vars - half, 0))


def build_mlec_gadget(formula: CnfFormula, partition: Partition | None = None) -> GadgetGraph:
    if partition is None:
        partition = mlec_partition(formula.num_vars)
    if partition.U3:
        raise ValueError("the edge-connectivity gadget uses two blocks only")
    tb = _tables(formula, partition)
    m = tb.m
    g = _Assembler()
    alphas = [g.node("alpha", a) for a in range(len(tb.alpha))]
    betas = [g.node("beta", b) for b in range(len(tb.beta))]
    ss, su, us = [], [], []
    for i in range(1, m + 1):
        ss.append(g.node("c_ss", i))
        su.append(g.node("c_su", i))
        us.append(g.node("c_us", i))
    for a, am in zip(alphas, tb.alpha):
        for i in range(m):
            if am >> i & 1:
                g.edge(a, ss[i], 1, None)
                g.edge(a, su[i], 1, None)
            else:
                g.edge(a, us[i], 1, None)
    # clause -> beta orientation, so each satisfied clause yields one alpha->beta path
    for b, bm in zip(betas, tb.beta):
        for i in range(m):
            if bm >> i & 1:
                g.edge(ss[i], b, 1, None)
                g.edge(us[i], b, 1, None)
            else:
                g.edge(su[i], b, 1, None)
    return g.finish("mlec", None, partition, formula)


def build_gadget(variant: str, formula: CnfFormula, partition: Partition, p: int | None = None) -> GadgetGraph:
    if variant == "uncap":
        return build_uncap_gadget(formula, partition, p)
    if variant == "cap":
        return build_cap_gadget(formula, partition, p)
    if variant == "mlec":
        return build_mlec_gadget(formula, partition)
    raise ValueError(f"unknown gadget variant {variant!r}")


class GadgetCounts(NamedTuple):
    nodes: int
    edges: int
    edge_bound: int


def expected_counts(variant: str, formula: CnfFormula, partition: Partition, p: int | None = None) -> GadgetCounts:
    """Closed-form node/edge counts of a gadget, plus the coarse edge upper bound.

    The exact edge count depends on how many block assignments leave each
    clause unsatisfied, so it is computed from those tallies.
    """
    tb = _tables(formula, partition)
    m = tb.m
    A, W, B = len(tb.alpha), len(tb.beta), len(tb.gamma)

    def unsat(masks: list[int]) -> int:
        return sum(m - bin(x).count("1") for x in masks)

    def sat(masks: list[int]) -> int:
        return sum(bin(x).count("1") for x in masks)

    if variant == "uncap":
        nodes = A + 2 * W * m + W + W * (p - 1) + B
        edges = A * W * m + W * unsat(tb.gamma) + 2 * W * m + (p - 1) * W + B * (p - 1) * W
        bound = A * W * m + B * W * m + 2 * W * m + (p - 1) * W + B * (p - 1) * W
    elif variant == "cap":
        nodes = A + 2 * m + W * 3 * m + W + 1 + m + B
        hub = W + B if p > 1 else 0
        edges = A * m + 5 * W * m + unsat(tb.beta) + hub + unsat(tb.gamma)
        bound = A * m + 6 * W * m + W + B + B * m
    elif variant == "mlec":
        nodes = A + W + 3 * m
        edges = A * m + sat(tb.alpha) + W * m + sat(tb.beta)
        bound = 2 * (A + W) * m  # at most two arcs per clause on either side
    else:
        raise ValueError(f"unknown gadget variant {variant!r}")
    return GadgetCounts(nodes, edges, bound)


def subgadget(g: GadgetGraph, alpha: int, beta: int, gamma: int) -> GadgetGraph:
    """Subgraph of an uncap gadget induced by ``alpha``, ``gamma`` and the nodes owned by ``beta``."""
    if g.variant != "uncap":
        raise ValueError("sub-gadgets are defined for the uncap construction")
    m, p = g.formula.m, g.p
    keep = [g.node("alpha", alpha)]
    keep += [g.node("beta_l", beta, i) for i in range(1, m + 1)]
    keep += [g.node("beta_r", beta, i) for i in range(1, m + 1)]
    keep.append(g.node("beta_prime", beta))
    keep += [g.node("beta_prime_j", beta, j) for j in range(1, p)]
    keep.append(g.node("gamma", gamma))
    new_id = {v: k for k, v in enumerate(keep)}
    edges, colors = [], []
    for (u, v, c), col in zip(g.net.edges, g.colors):
        if u in new_id and v in new_id:
            edges.append((new_id[u], new_id[v], c))
            colors.append(col)
    net = FlowNetwork(len(keep), tuple(edges))
    return GadgetGraph(net, tuple(g.roles[v] for v in keep), tuple(colors), "uncap-sub", p, g.partition, g.formula)


def _route(g: GadgetGraph, flows: list[int], path: Sequence[int]) -> None:
    for u, v in zip(path, path[1:]):
        e = g.edge_of.get((u, v))
        if e is None:
            raise ValueError(f"gadget lacks edge {g.roles[u]} -> {g.roles[v]}")
        flows[e] += 1


def _block_masks(g: GadgetGraph, *indices: int) -> list[int]:
    tb = g.tables
    return [(tb.alpha, tb.beta, tb.gamma)[k][x] for k, x in enumerate(indices)]


def _first_unsat(unsat: list[int], limit: int) -> list[int]:
    return unsat[: max(0, min(len(unsat), limit))]


def witness_flow_uncap(g: GadgetGraph, alpha: int, beta: int, gamma: int) -> FlowResult:
    """Two-phase flow on the sub-gadget of ``(alpha, beta, gamma)``.

    Phase one sends a unit along the blue path ``alpha -> beta_i^l -> gamma``
    for each clause in ``I`` (the first ``m - p + 1`` clauses the triple leaves
    unsatisfied, or all of them if fewer).  Phase two routes the remaining
    clauses through ``beta'`` and its ``p - 1`` fan-out nodes; clauses where
    neither ``alpha`` nor ``beta`` holds take the detour through ``beta_i^l``.
    The value is ``|I| + min(m - |I|, p - 1)``, i.e. ``m`` whenever the triple
    satisfies at most ``p - 1`` clauses.
    """
    sub = subgadget(g, alpha, beta, gamma)
    m, p = g.formula.m, g.p
    am, bm, cm = _block_masks(g, alpha, beta, gamma)
    unsat = [i for i in range(1, m + 1) if not (am | bm | cm) >> (i - 1) & 1]
    chosen = _first_unsat(unsat, m - p + 1)
    rest = [i for i in range(1, m + 1) if i not in chosen]
    a1 = [i for i in rest if not (am | bm) >> (i - 1) & 1]
    a2 = [i for i in rest if (am | bm) >> (i - 1) & 1]
    slot = {i: j for j, i in enumerate(a1 + a2, start=1)}  # bijection onto 1..m-|I|

    flows = [0] * sub.net.edge_count
    a, c, prime = sub.node("alpha", alpha), sub.node("gamma", gamma), sub.node("beta_prime", beta)
    for i in chosen:
        _route(sub, flows, [a, sub.node("beta_l", beta, i), c])
    for i in a1 + a2:
        j = slot[i]
        if j > p - 1:
            continue
        head = [a, sub.node("beta_l", beta, i)] if i in a1 else [a]
        _route(sub, flows, head + [sub.node("beta_r", beta, i), prime, sub.node("beta_prime_j", beta, j), c])
    value = len(chosen) + min(m - len(chosen), p - 1)
    return FlowResult(value, tuple(flows))


def triple_satisfied(g: GadgetGraph, alpha: int, beta: int, gamma: int) -> int:
    return bin(_combined_mask(g, alpha, beta, gamma)).count("1")


def _combined_mask(g: GadgetGraph, *indices: int) -> int:
    mask = 0
    for x in _block_masks(g, *indices):
        mask |= x
    return mask


def witness_flow_cap(g: GadgetGraph, alpha: int, gamma: int) -> FlowResult:
    """Flow of value ``2^|U2| * m`` from ``alpha`` to ``gamma`` in a cap gadget.

    Requires every ``beta`` to leave at least ``m - p + 1`` clauses unsatisfied
    together with ``alpha`` and ``gamma``.  For each ``beta`` the first
    ``m - p + 1`` such clauses carry a unit along the all-blue path; the other
    ``p - 1`` clauses go through ``beta_i^c``, ``beta'`` and the hub.
    """
    if g.variant != "cap":
        raise ValueError("witness_flow_cap needs a cap gadget")
    m, p = g.formula.m, g.p
    flows = [0] * g.net.edge_count
    a, c, hub = g.node("alpha", alpha), g.node("gamma", gamma), g.node("hub")
    am = _block_masks(g, alpha)[0]
    for beta in range(1 << len(g.partition.U2)):
        mask = _combined_mask(g, alpha, beta, gamma)
        unsat = [i for i in range(1, m + 1) if not mask >> (i - 1) & 1]
        if len(unsat) < m - p + 1:
            raise ValueError(f"triple ({alpha}, {beta}, {gamma}) satisfies at least p={p} clauses")
        chosen = unsat[: m - p + 1]
        for i in range(1, m + 1):
            if i in chosen:
                _route(g, flows, [a, g.node("clause_unsat", i), g.node("beta_l", beta, i),
                                  g.node("beta_r", beta, i), g.node("clause", i), c])
            elif am >> (i - 1) & 1:
                _route(g, flows, [a, g.node("clause_sat", i), g.node("beta_c", beta, i),
                                  g.node("beta_prime", beta), hub, c])
            else:
                _route(g, flows, [a, g.node("clause_unsat", i), g.node("beta_l", beta, i),
                                  g.node("beta_c", beta, i), g.node("beta_prime", beta), hub, c])
    return FlowResult((1 << len(g.partition.U2)) * m, tuple(flows))


def witness_cut_cap(g: GadgetGraph, assignment: Sequence[bool], absorb_sinks: bool = True) -> frozenset[int]:
    """Source side of a cut of capacity at most ``2^|U2| * m - 1`` separating the
    projections of ``assignment`` onto the first and last blocks.

    ``assignment`` must satisfy at least ``p`` clauses.  Clause nodes on the
    source side also feed gamma nodes other than the target, so with
    ``absorb_sinks`` those (edge-free) gamma nodes join the source side too;
    without it the cut can exceed the bound.
    """
    if g.variant != "cap":
        raise ValueError("witness_cut_cap needs a cap gadget")
    F, part, m = g.formula, g.partition, g.formula.m
    if F.count_satisfied(assignment) < g.p:
        raise ValueError(f"assignment satisfies fewer than p={g.p} clauses")
    a, b, c = (project(assignment, part, k).index for k in range(3))
    am, bm, cm = _block_masks(g, a, b, c)
    S = {g.node("alpha", a), g.node("beta_prime", b)}
    for i in range(1, m + 1):
        bit = 1 << (i - 1)
        S.add(g.node("clause_sat", i) if am & bit else g.node("clause_unsat", i))
        S.add(g.node("beta_c", b, i))
        if cm & bit:
            S.update((g.node("clause", i), g.node("beta_l", b, i), g.node("beta_r", b, i)))
        elif bm & bit:
            S.add(g.node("beta_l", b, i))
    if absorb_sinks:
        S.update(v for v in g.nodes_of_kind("gamma") if v != g.node("gamma", c))
    return frozenset(S)


def witness_cut_kpmf(g: GadgetGraph, alpha: int, gamma: int, absorb_sinks: bool = True) -> frozenset[int]:
    """Cut separating ``alpha`` from ``gamma`` whose capacity is governed by the middle layer.

    uncap: ``{alpha} u {beta_i^l}``, plus (with ``absorb_sinks``) every other
    gamma node; those have no outgoing edges, and absorbing them keeps each
    ``beta_i^l`` at two cut edges at most.
    cap: ``{alpha} u {C_i^sat, C_i^unsat} u {beta_i^l, beta_i^c}``; every cut
    edge has capacity 1.
    """
    m = g.formula.m
    betas = range(1 << len(g.partition.U2))
    S = {g.node("alpha", alpha)}
    if g.variant == "uncap":
        S.update(g.node("beta_l", b, i) for b in betas for i in range(1, m + 1))
        if absorb_sinks:
            S.update(v for v in g.nodes_of_kind("gamma") if v != g.node("gamma", gamma))
    elif g.variant == "cap":
        for i in range(1, m + 1):
            S.update((g.node("clause_sat", i), g.node("clause_unsat", i)))
        S.update(g.node(kind, b, i) for b in betas for i in range(1, m + 1) for kind in ("beta_l", "beta_c"))
    else:
        raise ValueError(f"no kPMF cut for variant {g.variant!r}")
    return frozenset(S)


def kpmf_cut_bound(g: GadgetGraph, alpha: int) -> int:
    """Capacity the kPMF cut is guaranteed not to exceed."""
    W, m = 1 << len(g.partition.U2), g.formula.m
    if g.variant == "uncap":
        a = g.node("alpha", alpha)
        return sum(1 for u, _, _ in g.net.edges if u == a) + 2 * W * m
    return 2 * W * m
