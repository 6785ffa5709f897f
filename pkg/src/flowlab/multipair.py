"""Multi-pair max-flow queries: ST, all-pairs, single-source, global, kPMF, Gomory-Hu."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

from . import flow
from .network import FlowNetwork


@dataclass(frozen=True)
class FlowMatrix:
    """Max-flow values for ``sources`` x ``sinks``; ``None`` where source == sink."""

    sources: tuple[int, ...]
    sinks: tuple[int, ...]
    values: tuple[tuple[int | None, ...], ...]

    def get(self, s: int, t: int) -> int | None:
        return self.values[self.sources.index(s)][self.sinks.index(t)]

    def entries(self):
        """``(s, t, value)`` for every defined cell, row-major."""
        for s, row in zip(self.sources, self.values):
            for t, x in zip(self.sinks, row):
                if x is not None:
                    yield s, t, x

    def max_entry(self) -> tuple[int, tuple[int, int]] | None:
        """Largest value and the lexicographically smallest pair attaining it."""
        best = None
        for s, t, x in sorted(self.entries(), key=lambda e: (e[0], e[1])):
            if best is None or x > best[0]:
                best = (x, (s, t))
        return best

    def to_csv(self, base: int = 0, keep=None) -> str:
        """Header row of sink ids, one row per source; ``-`` on the diagonal.

        ``keep`` optionally blanks cells whose value fails the predicate.
        """
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + [t + base for t in self.sinks])
        for s, row in zip(self.sources, self.values):
            cells = []
            for x in row:
                if x is None:
                    cells.append("-")
                elif keep is not None and not keep(x):
                    cells.append("")
                else:
                    cells.append(x)
            w.writerow([s + base] + cells)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, base: int = 0) -> FlowMatrix:
        rows = list(csv.reader(io.StringIO(text)))
        sinks = tuple(int(x) - base for x in rows[0][1:])
        sources, values = [], []
        for row in rows[1:]:
            sources.append(int(row[0]) - base)
            values.append(tuple(None if x == "-" else int(x) for x in row[1:]))
        return cls(tuple(sources), sinks, tuple(values))


def st_max_flow(net: FlowNetwork, sources: Sequence[int], sinks: Sequence[int]) -> FlowMatrix:
    if not sources or not sinks:
        raise ValueError("source and sink sets must be non-empty")
    for v in (*sources, *sinks):
        net.check_node(v)
    values = tuple(
        tuple(None if s == t else flow.max_flow_value(net, s, t) for t in sinks) for s in sources
    )
    return FlowMatrix(tuple(sources), tuple(sinks), values)


def all_pairs_max_flow(net: FlowNetwork) -> FlowMatrix:
    nodes = range(net.node_count)
    return st_max_flow(net, nodes, nodes)


def single_source_max_flow(net: FlowNetwork, s: int) -> list[int | None]:
    """Max flow from ``s`` to every node (``None`` at ``s`` itself)."""
    return list(st_max_flow(net, [s], range(net.node_count)).values[0])


def global_max_flow(net: FlowNetwork) -> tuple[int, tuple[int, int]]:
    if net.node_count < 2:
        raise ValueError("need at least two nodes")
    return all_pairs_max_flow(net).max_entry()


def max_local_edge_connectivity(net: FlowNetwork) -> tuple[int, tuple[int, int]]:
    """Largest number of edge-disjoint u->v paths over ordered pairs (unit capacities required)."""
    if any(c != 1 for _, _, c in net.edges):
        raise ValueError("local edge connectivity needs all capacities equal to 1")
    return global_max_flow(net)


def kpmf(net: FlowNetwork, k: int) -> list[tuple[int, int, int]]:
    """Ordered pairs whose max flow is at most ``k``, with their values, in lexicographic order."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = []
    for u in range(net.node_count):
        for v in range(net.node_count):
            if u != v:
                x = flow.max_flow_bounded(net, u, v, k)
                if x is not None:
                    out.append((u, v, x))
    return out


@dataclass(frozen=True)
class GomoryHuTree:
    """Rooted at node 0: ``parent[v]``/``weight[v]`` describe the tree edge above ``v``."""

    parent: tuple[int, ...]
    weight: tuple[int, ...]
    flow_computations: int = 0

    @property
    def node_count(self) -> int:
        return len(self.parent)

    def edges(self) -> list[tuple[int, int, int]]:
        return [(v, self.parent[v], self.weight[v]) for v in range(1, self.node_count)]


def gomory_hu_tree(net: FlowNetwork) -> GomoryHuTree:
    """Gusfield's construction: n-1 min-cut computations, all on the input graph."""
    if not net.undirected:
        raise ValueError("Gomory-Hu trees exist only for undirected graphs")
    n = net.node_count
    parent = [0] * n
    weight = [0] * n
    calls = 0
    for s in range(1, n):
        t = parent[s]
        cut = flow.min_cut(net, s, t)
        calls += 1
        weight[s] = cut.capacity
        for v in range(s + 1, n):
            if parent[v] == t and v in cut.source_side:
                parent[v] = s
    if n:
        parent[0] = -1
    return GomoryHuTree(tuple(parent), tuple(weight), calls)


def gh_query(tree: GomoryHuTree, u: int, v: int) -> int:
    """Minimum edge weight on the tree path between ``u`` and ``v``."""
    n = tree.node_count
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError("node outside the tree")
    if u == v:
        raise ValueError("query needs two distinct nodes")

    def ancestry(x: int) -> dict[int, int]:
        # node -> min weight on the path from x up to that node
        best, seen = None, {x: None}
        while tree.parent[x] >= 0:
            w = tree.weight[x]
            best = w if best is None else min(best, w)
            x = tree.parent[x]
            seen[x] = best
        return seen

    up = ancestry(u)
    best = None
    x = v
    while x not in up:
        w = tree.weight[x]
        best = w if best is None else min(best, w)
        x = tree.parent[x]
    for part in (up[x], best):
        if part is not None:
            best = part if best is None else min(best, part)
    return best
