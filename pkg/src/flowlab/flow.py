"""Exact single-pair maximum flow and minimum cut (Dinic blocking flows).

Every query copies the network's residual template, so a :class:`FlowNetwork`
may be shared by any number of concurrent queries.
"""

from __future__ import annotations

from graphlib import CycleError, TopologicalSorter
from typing import Iterable

import numpy as np

from .network import CutResult, FlowNetwork, FlowResult

BRUTE_FORCE_NODE_LIMIT = 20


def _check_pair(net: FlowNetwork, s: int, t: int) -> None:
    net.check_node(s)
    net.check_node(t)
    if s == t:
        raise ValueError("source and sink must differ")


def _levels(adj, head, cap, s, t, n):
    level = [-1] * n
    level[s] = 0
    queue = [s]
    for u in queue:
        nxt = level[u] + 1
        for a in adj[u]:
            if cap[a] > 0:
                v = head[a]
                if level[v] < 0:
                    level[v] = nxt
                    queue.append(v)
    return level if level[t] >= 0 else None


def _blocking_flow(adj, head, cap, level, s, t, budget):
    """Push a blocking flow along level-increasing arcs; stop early once ``budget`` is met."""
    it = [0] * len(adj)
    path: list[int] = []
    pushed = 0
    u = s
    while True:
        if u == t:
            f = min(cap[a] for a in path)
            if budget is not None:
                f = min(f, budget - pushed)
            for a in path:
                cap[a] -= f
                cap[a ^ 1] += f
            pushed += f
            if budget is not None and pushed >= budget:
                return pushed
            # retreat to the tail of the first saturated arc
            for k, a in enumerate(path):
                if cap[a] == 0:
                    del path[k:]
                    u = head[a ^ 1]
                    break
            continue
        arcs = adj[u]
        i = it[u]
        lu = level[u] + 1
        while i < len(arcs):
            a = arcs[i]
            if cap[a] > 0 and level[head[a]] == lu:
                break
            i += 1
        it[u] = i
        if i < len(arcs):
            a = arcs[i]
            path.append(a)
            u = head[a]
        elif u == s:
            return pushed
        else:
            level[u] = -1
            a = path.pop()
            u = head[a ^ 1]
            it[u] += 1


def _solve(net: FlowNetwork, s: int, t: int, limit: int | None = None):
    """Run Dinic on a private residual copy; returns ``(value, cap)``.

    With ``limit`` set, augmentation stops as soon as the flow exceeds it.
    """
    adj, head, base = net.residual_template
    cap = list(base)
    n = net.node_count
    value = 0
    while True:
        level = _levels(adj, head, cap, s, t, n)
        if level is None:
            return value, cap
        budget = None if limit is None else limit + 1 - value
        value += _blocking_flow(adj, head, cap, level, s, t, budget)
        if limit is not None and value > limit:
            return value, cap


def max_flow(net: FlowNetwork, s: int, t: int) -> FlowResult:
    """Exact maximum s-t flow with a feasible per-edge witness.

    For an undirected network the witness is indexed by the arcs of
    ``net.as_directed()``.
    """
    _check_pair(net, s, t)
    d = net.as_directed()
    value, cap = _solve(d, s, t)
    base = d.residual_template[2]
    flows = tuple(base[2 * e] - cap[2 * e] for e in range(d.edge_count))
    return FlowResult(value, flows)


def max_flow_value(net: FlowNetwork, s: int, t: int) -> int:
    _check_pair(net, s, t)
    return _solve(net.as_directed(), s, t)[0]


def max_flow_bounded(net: FlowNetwork, s: int, t: int, k: int) -> int | None:
    """Max-flow value if it is at most ``k``, otherwise ``None``.

    The solver halts as soon as the pushed flow exceeds ``k``, so the cost is
    bounded by ``k + 1`` augmentations no matter how large the true value is.
    """
    _check_pair(net, s, t)
    if k < 0:
        raise ValueError("k must be non-negative")
    value, _ = _solve(net.as_directed(), s, t, limit=k)
    return value if value <= k else None


def min_cut(net: FlowNetwork, s: int, t: int) -> CutResult:
    """Minimum s-t cut whose source side is everything reachable from ``s`` in the final residual graph."""
    _check_pair(net, s, t)
    d = net.as_directed()
    value, cap = _solve(d, s, t)
    adj, head, _ = d.residual_template
    seen = [False] * d.node_count
    seen[s] = True
    stack = [s]
    while stack:
        u = stack.pop()
        for a in adj[u]:
            v = head[a]
            if cap[a] > 0 and not seen[v]:
                seen[v] = True
                stack.append(v)
    side = frozenset(v for v in range(d.node_count) if seen[v])
    return CutResult(side, value)


def cut_capacity(net: FlowNetwork, source_side: Iterable[int]) -> int:
    """Total capacity of edges leaving ``source_side``."""
    S = set(source_side)
    d = net.as_directed()
    return sum(c for u, v, c in d.edges if u in S and v not in S)


def brute_force_min_cut(net: FlowNetwork, s: int, t: int) -> int:
    """Minimum s-t cut by enumerating every vertex bipartition (independent oracle)."""
    _check_pair(net, s, t)
    n = net.node_count
    if n > BRUTE_FORCE_NODE_LIMIT:
        raise ValueError(f"brute-force min cut is limited to {BRUTE_FORCE_NODE_LIMIT} nodes")
    free = [v for v in range(n) if v not in (s, t)]
    masks = np.arange(1 << len(free), dtype=np.int64)
    # membership[v] is a 0/1 vector over all candidate source sides
    membership = {s: np.ones_like(masks), t: np.zeros_like(masks)}
    for bit, v in enumerate(free):
        membership[v] = (masks >> bit) & 1
    total = np.zeros_like(masks)
    for u, v, c in net.as_directed().edges:
        total += c * (membership[u] & (1 - membership[v]))
    return int(total.min())


def is_acyclic(net: FlowNetwork) -> bool:
    if net.undirected:
        return net.edge_count == 0
    graph: dict[int, set[int]] = {v: set() for v in range(net.node_count)}
    for u, v, _ in net.edges:
        graph[v].add(u)
    try:
        tuple(TopologicalSorter(graph).static_order())
    except CycleError:
        return False
    return True
