import random

import pytest
from hypothesis import given, settings

from conftest import networks, random_network
from flowlab.flow import (
    brute_force_min_cut,
    cut_capacity,
    is_acyclic,
    max_flow,
    max_flow_bounded,
    max_flow_value,
    min_cut,
)
from flowlab.network import FlowNetwork, flow_violations

ONE_EDGE = FlowNetwork(2, ((0, 1, 7),))


def test_single_edge():
    assert max_flow(ONE_EDGE, 0, 1).value == 7
    cut = min_cut(ONE_EDGE, 0, 1)
    assert cut.source_side == {0} and cut.capacity == 7
    assert brute_force_min_cut(ONE_EDGE, 0, 1) == 7


def test_two_disjoint_paths():
    net = FlowNetwork(4, ((0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)))
    assert max_flow(net, 0, 3).value == 2


def test_bottleneck_path():
    net = FlowNetwork(3, ((0, 1, 3), (1, 2, 1)))
    assert min_cut(net, 0, 2).capacity == 1
    assert min_cut(net, 0, 2).source_side == {0, 1}


def test_no_edges():
    net = FlowNetwork(3)
    assert max_flow(net, 0, 2).value == 0
    assert brute_force_min_cut(net, 0, 2) == 0


def test_bounded():
    assert max_flow_bounded(ONE_EDGE, 0, 1, 3) is None
    assert max_flow_bounded(FlowNetwork(2, ((0, 1, 2),)), 0, 1, 3) == 2
    assert max_flow_bounded(ONE_EDGE, 0, 1, 7) == 7
    assert max_flow_bounded(ONE_EDGE, 0, 1, 6) is None


def test_cut_capacity():
    assert cut_capacity(ONE_EDGE, {0, 1}) == 0
    assert cut_capacity(ONE_EDGE, {0}) == 7
    assert cut_capacity(ONE_EDGE, {1}) == 0


def test_acyclic():
    assert is_acyclic(ONE_EDGE)
    assert not is_acyclic(FlowNetwork(2, ((0, 1, 1), (1, 0, 1))))
    assert is_acyclic(FlowNetwork(5))


@pytest.mark.parametrize(
    "build",
    [
        lambda: FlowNetwork(2, ((0, 2, 1),)),
        lambda: FlowNetwork(2, ((1, 1, 1),)),
        lambda: FlowNetwork(2, ((0, 1, 0),)),
        lambda: FlowNetwork(2, ((0, 1, -3),)),
        lambda: FlowNetwork(2, ((0, 1, 2**61), (0, 1, 2**61), (1, 0, 1))),
    ],
    ids=["bad-node", "self-loop", "zero-cap", "negative-cap", "overflow"],
)
def test_construction_guards(build):
    with pytest.raises(ValueError):
        build()


def test_query_errors():
    with pytest.raises(ValueError):
        max_flow(ONE_EDGE, 0, 0)
    with pytest.raises(ValueError):
        max_flow(ONE_EDGE, 0, 5)
    with pytest.raises(ValueError):
        min_cut(ONE_EDGE, 1, 1)
    with pytest.raises(ValueError):
        max_flow_bounded(ONE_EDGE, 0, 1, -1)
    with pytest.raises(ValueError):
        brute_force_min_cut(FlowNetwork(21), 0, 1)


def test_parallel_edges_kept_distinct():
    net = FlowNetwork(2, ((0, 1, 2), (0, 1, 3)))
    res = max_flow(net, 0, 1)
    assert res.value == 5 and res.edge_flows == (2, 3)


def test_deterministic_witness():
    rng = random.Random(5)
    net = random_network(rng, 8)
    assert max_flow(net, 0, 1) == max_flow(net, 0, 1)


def test_random_networks_match_brute_force():
    rng = random.Random(7)
    for _ in range(100):
        net = random_network(rng, 8)
        s, t = rng.sample(range(net.node_count), 2)
        res = max_flow(net, s, t)
        cut = min_cut(net, s, t)
        assert res.value == cut.capacity == brute_force_min_cut(net, s, t)
        assert cut_capacity(net, cut.source_side) == cut.capacity
        assert s in cut.source_side and t not in cut.source_side
        assert flow_violations(net, s, t, res.edge_flows, res.value) == []


@settings(max_examples=150, deadline=None)
@given(networks())
def test_duality_property(net):
    for s in range(net.node_count):
        for t in range(net.node_count):
            if s != t:
                res = max_flow(net, s, t)
                assert flow_violations(net, s, t, res.edge_flows, res.value) == []
                assert res.value == min_cut(net, s, t).capacity == brute_force_min_cut(net, s, t)


@settings(max_examples=100, deadline=None)
@given(networks())
def test_bounded_consistent(net):
    s, t = 0, net.node_count - 1
    v = max_flow_value(net, s, t)
    for k in range(0, v + 3):
        got = max_flow_bounded(net, s, t, k)
        assert got == (v if v <= k else None)
    assert max_flow_bounded(net, s, t, 2**62) == v


def test_monotone_under_edge_insertion():
    rng = random.Random(11)
    for _ in range(60):
        net = random_network(rng, 8)
        s, t = 0, net.node_count - 1
        before = max_flow_value(net, s, t)
        u, v = rng.sample(range(net.node_count), 2)
        grown = net.with_edges(net.edges + ((u, v, rng.randint(1, 5)),))
        assert max_flow_value(grown, s, t) >= before


def test_undirected_flow_uses_both_directions():
    net = FlowNetwork(3, ((0, 1, 4), (2, 1, 3)), undirected=True)
    assert max_flow_value(net, 0, 2) == 3
    assert max_flow_value(net, 2, 0) == 3
    res = max_flow(net, 2, 0)
    assert flow_violations(net.as_directed(), 2, 0, res.edge_flows, res.value) == []
