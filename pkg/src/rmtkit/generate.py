"""Seeded instance generators and the small named instances used in docs and tests."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, fields

from .adversary import normalize, threshold
from .cuts import Instance
from .topology import Graph, ViewFunction, ad_hoc_view, full_view, sorted_edges

MAX_GENERATED_NODES = 12


class GeneratorError(ValueError):
    pass


def _instance(edges, maximal, name, sender="S", receiver="R", nodes=()):
    g = Graph.from_edges(edges, nodes)
    return Instance(g, normalize(g.nodes, maximal), ad_hoc_view(g), sender, receiver, name)


def path_instance() -> Instance:
    """S - u - R, the middle node corruptible."""
    return _instance([("S", "u"), ("u", "R")], [{"u"}], "path")


def two_path_instance() -> Instance:
    """Two disjoint S-R paths through v1 and v2; either may be corrupted."""
    return _instance(
        [("S", "v1"), ("v1", "R"), ("S", "v2"), ("v2", "R")], [{"v1"}, {"v2"}], "two_path"
    )


def three_path_instance() -> Instance:
    """Three disjoint S-R paths; any single relay may be corrupted."""
    edges = [(a, b) for v in ("v1", "v2", "v3") for a, b in (("S", v), (v, "R"))]
    return _instance(edges, [{"v1"}, {"v2"}, {"v3"}], "three_path")


def named_instances() -> list:
    return [path_instance(), two_path_instance(), three_path_instance()]


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for :func:`generate_instances`.

    ``family`` is ``"random"`` (an antichain of ``num_sets`` random sets of
    size up to ``max_set_size``) or ``"threshold"`` (all ``t``-subsets).
    ``view_mode`` is ``"ad_hoc"``, ``"full"`` or ``"random"``; random views
    extend the ad hoc view with each other edge with probability
    ``view_density``.
    """

    count: int = 10
    min_nodes: int = 4
    max_nodes: int = 6
    density: float = 0.5
    family: str = "random"
    t: int = 1
    num_sets: int = 2
    max_set_size: int = 2
    view_mode: str = "ad_hoc"
    view_density: float = 0.5
    non_adjacent: bool = True
    connected: bool = True
    # keep S and R out of every corruptible set
    honest_endpoints: bool = True

    @classmethod
    def from_dict(cls, d) -> "GeneratorSpec":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise GeneratorError(f"unknown generator parameters: {sorted(unknown)!r}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self):
        if self.count < 0:
            raise GeneratorError("count must be non-negative")
        if not 2 <= self.min_nodes <= self.max_nodes:
            raise GeneratorError("need 2 <= min_nodes <= max_nodes")
        if self.max_nodes > MAX_GENERATED_NODES:
            raise GeneratorError(f"max_nodes above the limit of {MAX_GENERATED_NODES}")
        if not 0.0 <= self.density <= 1.0 or not 0.0 <= self.view_density <= 1.0:
            raise GeneratorError("densities must lie in [0, 1]")
        if self.family not in ("random", "threshold"):
            raise GeneratorError(f"unknown adversary family {self.family!r}")
        if self.view_mode not in ("ad_hoc", "full", "random"):
            raise GeneratorError(f"unknown view mode {self.view_mode!r}")
        if self.non_adjacent and (self.density >= 1.0 or self.max_nodes < 3):
            raise GeneratorError("non-adjacent sender and receiver impossible in a complete graph")
        if self.connected and self.non_adjacent and self.density <= 0.0:
            raise GeneratorError("a connected graph with non-adjacent S, R needs positive density")


def _random_graph(rng, spec, n):
    relays = [f"v{i}" for i in range(1, n - 1)]
    nodes = ["S", "R"] + relays
    pairs = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]]
    for _ in range(1000):
        edges = [p for p in pairs if rng.random() < spec.density]
        g = Graph.from_edges(edges, nodes)
        if spec.non_adjacent and g.has_edge("S", "R"):
            continue
        if spec.connected and g.component("S") != g.nodes:
            continue
        return g
    raise GeneratorError("could not draw a graph meeting the constraints in 1000 attempts")


def _random_structure(rng, spec, g):
    pool = sorted(g.nodes - ({"S", "R"} if spec.honest_endpoints else set()))
    if spec.family == "threshold":
        return threshold(g.nodes, spec.t, exclude=g.nodes - set(pool))
    family = []
    for _ in range(spec.num_sets):
        k = rng.randint(1, max(1, min(spec.max_set_size, len(pool))))
        family.append(frozenset(rng.sample(pool, min(k, len(pool)))))
    return normalize(g.nodes, family)


def _random_views(rng, spec, g):
    if spec.view_mode == "ad_hoc":
        return ad_hoc_view(g)
    if spec.view_mode == "full":
        return full_view(g)
    base = ad_hoc_view(g)
    views = {}
    all_edges = [frozenset(e) for e in sorted_edges(g.edges)]
    for v in sorted(g.nodes):
        nodes, edges = set(base[v].nodes), set(base[v].edges)
        for e in all_edges:
            if e not in edges and rng.random() < spec.view_density:
                edges.add(e)
                nodes |= e
        views[v] = Graph(frozenset(nodes), frozenset(edges))
    return ViewFunction(views)


def generate_instances(spec: GeneratorSpec, seed: int) -> list:
    spec.validate()
    rng = random.Random(seed)
    out = []
    for i in range(spec.count):
        n = rng.randint(spec.min_nodes, spec.max_nodes)
        g = _random_graph(rng, spec, n)
        z = _random_structure(rng, spec, g)
        gamma = _random_views(rng, spec, g)
        out.append(Instance(g, z, gamma, "S", "R", f"gen-{seed}-{i}"))
    return out
