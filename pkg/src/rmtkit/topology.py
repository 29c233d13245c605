"""Graphs, view functions and sender/receiver vertex cuts.

Node identifiers are strings or small integers. Every iteration that can
leak into output goes through :func:`node_key` so that traces, witnesses
and serialized files come out in one fixed order.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

NodeId = Union[int, str]


class TopologyError(ValueError):
    pass


class UnknownNodeError(TopologyError, KeyError):
    def __init__(self, node, where="graph"):
        super().__init__(f"unknown node {node!r} in {where}")
        self.node = node

    def __str__(self):
        return self.args[0]


def node_key(v):
    # ints sort before strings; mixing both in one instance is allowed
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise TopologyError(f"node ids must be str or int, got {v!r}")
    return (0, v, "") if isinstance(v, int) else (1, 0, v)


def sorted_nodes(nodes: Iterable[NodeId]) -> list:
    return sorted(nodes, key=node_key)


def edge(u, v) -> frozenset:
    if u == v:
        raise TopologyError(f"self-loop on {u!r}")
    return frozenset((u, v))


def edge_key(e):
    u, v = sorted_nodes(e)
    return (node_key(u), node_key(v))


def sorted_edges(edges: Iterable[frozenset]) -> list:
    """Edges as sorted ``(u, v)`` tuples, ``u`` before ``v``."""
    return [tuple(sorted_nodes(e)) for e in sorted(edges, key=edge_key)]


def set_key(s):
    return tuple(node_key(v) for v in sorted_nodes(s))


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph. Also used for subgraphs (views)."""

    nodes: frozenset
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(frozenset(e) for e in self.edges))
        for v in self.nodes:
            node_key(v)
        for e in self.edges:
            if len(e) != 2:
                raise TopologyError(f"malformed edge {sorted_nodes(e)!r}")
            for v in e:
                if v not in self.nodes:
                    raise UnknownNodeError(v, "edge endpoints")
        adj = {v: set() for v in self.nodes}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(
            self, "_adj", {v: frozenset(ns) for v, ns in adj.items()}
        )

    @classmethod
    def from_edges(cls, edges, nodes=()) -> "Graph":
        es = {edge(u, v) for u, v in edges}
        ns = set(nodes)
        for e in es:
            ns |= e
        return cls(frozenset(ns), frozenset(es))

    def neighbors(self, v) -> frozenset:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownNodeError(v) from None

    def has_edge(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges

    def is_subgraph_of(self, other: "Graph") -> bool:
        return self.nodes <= other.nodes and self.edges <= other.edges

    def without(self, removed) -> "Graph":
        removed = frozenset(removed)
        return Graph(
            self.nodes - removed,
            frozenset(e for e in self.edges if not (e & removed)),
        )

    def component(self, v) -> frozenset:
        """Connected component containing ``v``."""
        self.neighbors(v)
        seen = {v}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return frozenset(seen)

    def __repr__(self):
        return f"Graph(nodes={sorted_nodes(self.nodes)!r}, edges={sorted_edges(self.edges)!r})"


Subgraph = Graph


def neighbors(g: Graph, v) -> frozenset:
    return g.neighbors(v)


@dataclass(frozen=True)
class ViewFunction:
    """Per-node topology knowledge: ``views[v]`` is the subgraph ``v`` knows."""

    views: Mapping

    def __post_init__(self):
        object.__setattr__(self, "views", dict(self.views))
        for v, sub in self.views.items():
            if v not in sub.nodes:
                raise TopologyError(f"view of {v!r} does not contain {v!r}")

    def __getitem__(self, v) -> Graph:
        try:
            return self.views[v]
        except KeyError:
            raise UnknownNodeError(v, "view function") from None

    def __contains__(self, v):
        return v in self.views

    def __eq__(self, other):
        return isinstance(other, ViewFunction) and self.views == other.views

    def __hash__(self):
        return hash(frozenset(self.views.items()))

    def validate(self, g: Graph):
        """Check totality on ``g`` and that every view is a subgraph of ``g``."""
        missing = g.nodes - self.views.keys()
        if missing:
            raise TopologyError(f"view function undefined on {sorted_nodes(missing)!r}")
        extra = self.views.keys() - g.nodes
        if extra:
            raise UnknownNodeError(sorted_nodes(extra)[0], "view function domain")
        for v, sub in self.views.items():
            if not sub.nodes <= g.nodes:
                bad = sorted_nodes(sub.nodes - g.nodes)[0]
                raise UnknownNodeError(bad, f"view of {v!r}")
            if not sub.edges <= g.edges:
                bad = sorted_edges(sub.edges - g.edges)[0]
                raise TopologyError(f"view of {v!r} has non-edge {bad!r}")


def ad_hoc_view(g: Graph) -> ViewFunction:
    """Each node knows itself, its neighbours and its incident edges."""
    views = {}
    for v in g.nodes:
        ns = g.neighbors(v)
        views[v] = Graph(ns | {v}, frozenset(frozenset((v, u)) for u in ns))
    return ViewFunction(views)


def full_view(g: Graph) -> ViewFunction:
    return ViewFunction({v: g for v in g.nodes})


def joint_view(gamma: ViewFunction, s) -> Graph:
    s = frozenset(s)
    if not s:
        raise TopologyError("joint view of an empty node set is undefined")
    nodes, edges = set(), set()
    for v in s:
        sub = gamma[v]
        nodes |= sub.nodes
        edges |= sub.edges
    return Graph(frozenset(nodes), frozenset(edges))


@dataclass(frozen=True)
class CutWitness:
    """A vertex cut ``cut`` with sides ``side_a`` (sender) and ``side_b``
    (receiver), optionally split into ``part1``/``part2``."""

    cut: frozenset
    side_a: frozenset
    side_b: frozenset
    part1: Optional[frozenset] = None
    part2: Optional[frozenset] = None

    def with_split(self, part1, part2) -> "CutWitness":
        return CutWitness(self.cut, self.side_a, self.side_b, frozenset(part1), frozenset(part2))

    def validate(self, g: Graph, s, r, need_split=True):
        a, b, c = self.side_a, self.side_b, self.cut
        if a & b or a & c or b & c or (a | b | c) != g.nodes:
            raise TopologyError("cut and sides do not partition the node set")
        if s not in a or r not in b:
            raise TopologyError("sender must lie in side A and receiver in side B")
        for e in g.edges:
            if e & a and e & b:
                raise TopologyError(f"edge {sorted_edges([e])[0]!r} joins side A and side B")
        if need_split:
            if self.part1 is None or self.part2 is None:
                raise TopologyError("witness has no C1/C2 split")
            if self.part1 & self.part2 or (self.part1 | self.part2) != c:
                raise TopologyError("C1 and C2 must partition the cut")

    def to_dict(self):
        d = {
            "cut": sorted_nodes(self.cut),
            "side_a": sorted_nodes(self.side_a),
            "side_b": sorted_nodes(self.side_b),
        }
        if self.part1 is not None:
            d["part1"] = sorted_nodes(self.part1)
            d["part2"] = sorted_nodes(self.part2)
        return d


def enumerate_cuts(g: Graph, s, r) -> Iterator[CutWitness]:
    """Yield every node set separating ``s`` from ``r``, smallest first.

    ``side_b`` is always the component of ``r`` once the cut is removed;
    every admissible receiver side contains that component, and both cut
    conditions only get weaker as B shrinks, so nothing is lost.
    """
    g.neighbors(s)
    g.neighbors(r)
    if s == r:
        raise TopologyError("sender and receiver must differ")
    if g.has_edge(s, r):
        return
    others = sorted_nodes(g.nodes - {s, r})
    for size in range(len(others) + 1):
        for combo in itertools.combinations(others, size):
            cut = frozenset(combo)
            b = g.without(cut).component(r)
            if s in b:
                continue
            yield CutWitness(cut, g.nodes - cut - b, b)
