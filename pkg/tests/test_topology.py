import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmtkit.topology import (
    Graph,
    TopologyError,
    UnknownNodeError,
    ViewFunction,
    ad_hoc_view,
    enumerate_cuts,
    full_view,
    joint_view,
    neighbors,
    node_key,
    sorted_nodes,
)

from oracles import components, reachable


def test_neighbors_triangle():
    g = Graph.from_edges([("S", "a"), ("a", "R"), ("S", "R")])
    assert neighbors(g, "S") == {"a", "R"}


def test_neighbors_path_middle(path):
    assert neighbors(path.graph, "u") == {"S", "R"}


def test_neighbors_isolated():
    g = Graph.from_edges([("S", "R")], nodes=["w"])
    assert neighbors(g, "w") == frozenset()


def test_neighbors_unknown_node_is_named():
    g = Graph.from_edges([("S", "R")])
    with pytest.raises(UnknownNodeError, match="'zz'"):
        neighbors(g, "zz")


def test_graph_rejects_self_loop_and_dangling_edge():
    with pytest.raises(TopologyError):
        Graph.from_edges([("a", "a")])
    with pytest.raises(UnknownNodeError):
        Graph(frozenset({"a"}), frozenset({frozenset({"a", "b"})}))


def test_node_order_mixes_ints_and_strings():
    assert sorted_nodes(["b", 3, "a", 1]) == [1, 3, "a", "b"]
    with pytest.raises(TopologyError):
        node_key(1.5)


def test_ad_hoc_view_path(path):
    u = ad_hoc_view(path.graph)["u"]
    assert u.nodes == {"S", "u", "R"}
    assert u.edges == {frozenset({"S", "u"}), frozenset({"u", "R"})}


def test_ad_hoc_view_star():
    g = Graph.from_edges([("c", "l1"), ("c", "l2"), ("c", "l3")])
    gamma = ad_hoc_view(g)
    assert gamma["c"].nodes == g.nodes
    assert gamma["l1"].nodes == {"l1", "c"}
    assert gamma["l1"].edges == {frozenset({"l1", "c"})}


def test_ad_hoc_view_leaves_out_edges_between_neighbours():
    g = Graph.from_edges([("v", "a"), ("v", "b"), ("a", "b")])
    assert frozenset({"a", "b"}) not in ad_hoc_view(g)["v"].edges


def test_joint_view_singleton(two_path):
    gamma = two_path.gamma
    assert joint_view(gamma, {"v1"}) == gamma["v1"]


def test_joint_view_path_endpoints(path):
    jv = joint_view(path.gamma, {"S", "R"})
    assert jv.nodes == {"S", "u", "R"}
    assert jv.edges == path.graph.edges


def test_joint_view_everyone_is_whole_graph(three_path):
    g = three_path.graph
    # direct union, written out independently of joint_view
    nodes, edges = set(), set()
    for v in g.nodes:
        nodes |= {v} | {w for e in g.edges if v in e for w in e}
        edges |= {e for e in g.edges if v in e}
    assert (nodes, edges) == (set(g.nodes), set(g.edges))
    assert joint_view(three_path.gamma, g.nodes) == g


def test_joint_view_empty_set_is_error(path):
    with pytest.raises(TopologyError):
        joint_view(path.gamma, set())


def test_view_function_must_contain_owner():
    g = Graph.from_edges([("a", "b")])
    with pytest.raises(TopologyError):
        ViewFunction({"a": Graph(frozenset({"b"}), frozenset())})


def test_view_function_validate_rejects_foreign_edge():
    g = Graph.from_edges([("a", "b"), ("b", "c")])
    bad = dict(ad_hoc_view(g).views)
    bad["a"] = Graph.from_edges([("a", "c")])
    with pytest.raises(TopologyError):
        ViewFunction(bad).validate(g)


def test_cuts_path(path):
    cuts = list(enumerate_cuts(path.graph, "S", "R"))
    assert [(w.cut, w.side_a, w.side_b) for w in cuts] == [({"u"}, {"S"}, {"R"})]


def test_cuts_adjacent_sender_receiver_is_empty():
    g = Graph.from_edges([("S", "R"), ("S", "a"), ("a", "R")])
    assert list(enumerate_cuts(g, "S", "R")) == []


def test_cuts_same_endpoint_is_error(path):
    with pytest.raises(TopologyError):
        list(enumerate_cuts(path.graph, "S", "S"))


def _brute_cut_sets(g, s, r):
    others = sorted(g.nodes - {s, r})
    found = []
    for k in range(len(others) + 1):
        for c in itertools.combinations(others, k):
            if r not in reachable(g.nodes, g.edges, s, frozenset(c)):
                found.append(frozenset(c))
    return found


def test_cuts_two_paths_with_extra_node(two_path):
    g = Graph.from_edges(list(map(tuple, map(sorted, two_path.graph.edges))) + [("v2", "x")])
    cuts = [w.cut for w in enumerate_cuts(g, "S", "R")]
    assert frozenset({"v1", "v2"}) in cuts
    assert frozenset({"v1", "v2", "x"}) in cuts
    assert sorted(cuts, key=sorted) == sorted(_brute_cut_sets(g, "S", "R"), key=sorted)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 6))
    nodes = [f"n{i}" for i in range(n)]
    pairs = list(itertools.combinations(nodes, 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(chosen, nodes)


@given(small_graphs())
def test_every_cut_separates_and_b_is_receiver_component(g):
    s, r = "n0", "n1"
    emitted = list(enumerate_cuts(g, s, r))
    for w in emitted:
        w.validate(g, s, r, need_split=False)
        comps = components(g.nodes, g.edges, w.cut)
        assert w.side_b in comps and r in w.side_b
    if not g.has_edge(s, r):
        assert {w.cut for w in emitted} == set(_brute_cut_sets(g, s, r))


@given(small_graphs(), st.data())
def test_joint_view_monotone(g, data):
    gamma = ad_hoc_view(g)
    nodes = sorted(g.nodes)
    s2 = data.draw(st.sets(st.sampled_from(nodes), min_size=1))
    s1 = data.draw(st.sets(st.sampled_from(sorted(s2)), min_size=1))
    assert joint_view(gamma, s1).is_subgraph_of(joint_view(gamma, s2))


@given(small_graphs())
def test_ad_hoc_view_nodes_are_closed_neighbourhoods(g):
    gamma = ad_hoc_view(g)
    gamma.validate(g)
    for v in g.nodes:
        assert gamma[v].nodes == {v} | neighbors(g, v)


def test_full_view_is_graph(two_path):
    assert all(sub == two_path.graph for sub in full_view(two_path.graph).views.values())
