"""Integer-capacity flow networks and the result types produced by flow queries."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

# sum of all capacities must stay below this so every flow value fits in int64
CAPACITY_LIMIT = 2**62


@dataclass(frozen=True)
class FlowNetwork:
    """Directed multigraph on nodes ``0..node_count-1`` with positive integer capacities.

    An ``undirected`` network stores each edge once; flow queries realize it as
    two antiparallel arcs (see :meth:`as_directed`).
    """

    node_count: int
    edges: tuple[tuple[int, int, int], ...] = ()
    undirected: bool = False

    def __post_init__(self) -> None:
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        edges = tuple((int(u), int(v), int(c)) for u, v, c in self.edges)
        total = 0
        for u, v, c in edges:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) references a node outside 0..{self.node_count - 1}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if c < 1:
                raise ValueError(f"edge ({u}, {v}) has capacity {c}; capacities must be >= 1")
            total += c
        if total > CAPACITY_LIMIT:
            raise ValueError("total capacity exceeds 2**62")
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def check_node(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.node_count):
            raise ValueError(f"invalid node id {v!r} for a network with {self.node_count} nodes")

    def with_edges(self, edges: Iterable[tuple[int, int, int]]) -> FlowNetwork:
        return FlowNetwork(self.node_count, tuple(edges), self.undirected)

    def as_directed(self) -> FlowNetwork:
        """Directed realization: edge ``k`` becomes arcs ``2k`` (u->v) and ``2k+1`` (v->u)."""
        if not self.undirected:
            return self
        return self._directed

    @cached_property
    def _directed(self) -> FlowNetwork:
        arcs = []
        for u, v, c in self.edges:
            arcs.append((u, v, c))
            arcs.append((v, u, c))
        return FlowNetwork(self.node_count, tuple(arcs))

    @cached_property
    def residual_template(self) -> tuple[list[list[int]], list[int], list[int]]:
        """Static residual structure ``(adj, head, cap)``.

        Arc ``2e`` is edge ``e`` forward, ``2e+1`` its reverse. Adjacency lists
        follow edge insertion order, which fixes all tie-breaking.
        """
        if self.undirected:
            raise ValueError("undirected networks are solved through as_directed()")
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        head: list[int] = []
        cap: list[int] = []
        for e, (u, v, c) in enumerate(self.edges):
            adj[u].append(2 * e)
            adj[v].append(2 * e + 1)
            head += (v, u)
            cap += (c, 0)
        return adj, head, cap


@dataclass(frozen=True)
class FlowResult:
    """Maximum-flow value plus a per-edge witness flow (indexed like ``net.edges``)."""

    value: int
    edge_flows: tuple[int, ...]


@dataclass(frozen=True)
class CutResult:
    source_side: frozenset[int]
    capacity: int


def flow_violations(
    net: FlowNetwork, s: int, t: int, edge_flows: Sequence[int], value: int | None = None
) -> list[str]:
    """List every way ``edge_flows`` fails to be a feasible s-t flow (empty when feasible)."""
    problems: list[str] = []
    if len(edge_flows) != net.edge_count:
        return [f"expected {net.edge_count} edge flows, got {len(edge_flows)}"]
    excess = [0] * net.node_count
    for k, ((u, v, c), f) in enumerate(zip(net.edges, edge_flows)):
        if not 0 <= f <= c:
            problems.append(f"edge {k} ({u}->{v}) carries {f}, capacity {c}")
        excess[u] -= f
        excess[v] += f
    for x, ex in enumerate(excess):
        if x not in (s, t) and ex != 0:
            problems.append(f"conservation violated at node {x} (excess {ex})")
    if -excess[s] != excess[t]:
        problems.append(f"source outflow {-excess[s]} != sink inflow {excess[t]}")
    if value is not None and excess[t] != value:
        problems.append(f"sink inflow {excess[t]} != reported value {value}")
    return problems


@dataclass
class NetworkBuilder:
    """Append-only helper for assembling a network edge by edge."""

    node_count: int = 0
    edges: list[tuple[int, int, int]] = field(default_factory=list)

    def add_node(self) -> int:
        self.node_count += 1
        return self.node_count - 1

    def add_edge(self, u: int, v: int, capacity: int = 1) -> int:
        self.edges.append((u, v, capacity))
        return len(self.edges) - 1

    def build(self) -> FlowNetwork:
        return FlowNetwork(self.node_count, tuple(self.edges))
