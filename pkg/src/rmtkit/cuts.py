"""RMT instances and brute-force search for Z-pp cuts and RMT-cuts.

Deciding whether either kind of cut exists is NP-hard, so the search here
is exhaustive and guarded by a node-count limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .adversary import (
    AdversaryStructure,
    joint_structure,
    local_structure,
    member,
    subsets,
)
from .topology import (
    CutWitness,
    Graph,
    TopologyError,
    UnknownNodeError,
    ViewFunction,
    ad_hoc_view,
    enumerate_cuts,
    joint_view,
)

DEFAULT_SIZE_LIMIT = 12


class InstanceError(ValueError):
    pass


class NotAdHocError(InstanceError):
    pass


class SizeLimitError(RuntimeError):
    def __init__(self, n, limit):
        super().__init__(
            f"instance has {n} nodes, above the exhaustive-search limit of {limit}; "
            f"raise it with --size-limit if you are prepared to wait"
        )
        self.n = n
        self.limit = limit


@dataclass(frozen=True, eq=True)
class Instance:
    graph: Graph
    adversary: AdversaryStructure
    gamma: ViewFunction
    sender: object
    receiver: object
    name: str = field(default="", compare=False)

    def __post_init__(self):
        g = self.graph
        if self.sender == self.receiver:
            raise InstanceError("sender and receiver must differ")
        for role, v in (("sender", self.sender), ("receiver", self.receiver)):
            if v not in g.nodes:
                raise UnknownNodeError(v, f"graph ({role})")
        if self.adversary.ground != g.nodes:
            raise InstanceError("adversary ground set must equal the node set")
        try:
            self.gamma.validate(g)
        except TopologyError as exc:
            raise InstanceError(str(exc)) from exc

    @cached_property
    def is_ad_hoc(self) -> bool:
        return self.gamma == ad_hoc_view(self.graph)

    @cached_property
    def _local(self):
        return {v: local_structure(self.adversary, self.gamma, v) for v in self.graph.nodes}

    def local(self, v) -> AdversaryStructure:
        """Local structure of ``v`` (cached)."""
        return self._local[v]

    def with_gamma(self, gamma) -> "Instance":
        return Instance(self.graph, self.adversary, gamma, self.sender, self.receiver, self.name)


def _check_witness(inst, w):
    try:
        w.validate(inst.graph, inst.sender, inst.receiver)
    except TopologyError as exc:
        raise InstanceError(f"malformed cut witness: {exc}") from exc


def _zpp_b_side_ok(inst, side_b, part2) -> bool:
    g = inst.graph
    return all(member(inst.local(u), g.neighbors(u) & part2) for u in side_b)


def _rmt_b_side_ok(inst, side_b, part2, zb=None, seen=None) -> bool:
    if seen is None:
        seen = joint_view(inst.gamma, side_b).nodes
    if zb is None:
        zb = joint_structure(inst.adversary, inst.gamma, side_b)
    return member(zb, part2 & seen)


def check_zpp_cut(inst: Instance, w: CutWitness) -> bool:
    if not inst.is_ad_hoc:
        raise NotAdHocError("Z-pp cuts are defined for ad hoc instances only")
    _check_witness(inst, w)
    return member(inst.adversary, w.part1) and _zpp_b_side_ok(inst, w.side_b, w.part2)


def check_rmt_cut(inst: Instance, w: CutWitness) -> bool:
    _check_witness(inst, w)
    return member(inst.adversary, w.part1) and _rmt_b_side_ok(inst, w.side_b, w.part2)


def _guard(inst, size_limit):
    n = len(inst.graph.nodes)
    if size_limit is not None and n > size_limit:
        raise SizeLimitError(n, size_limit)


def _splits(inst, cut):
    """``(C1, C2)`` pairs with ``C1`` corruptible, largest ``C1`` first."""
    traces = [m & cut for m in inst.adversary.maximal_sets]
    for c1 in reversed(list(subsets(cut))):
        if any(c1 <= t for t in traces):
            yield c1, cut - c1


def find_zpp_cut(inst: Instance, size_limit: Optional[int] = DEFAULT_SIZE_LIMIT) -> Optional[CutWitness]:
    if not inst.is_ad_hoc:
        raise NotAdHocError("Z-pp cuts are defined for ad hoc instances only")
    _guard(inst, size_limit)
    for w in enumerate_cuts(inst.graph, inst.sender, inst.receiver):
        for c1, c2 in _splits(inst, w.cut):
            if _zpp_b_side_ok(inst, w.side_b, c2):
                return w.with_split(c1, c2)
    return None


def find_rmt_cut(inst: Instance, size_limit: Optional[int] = DEFAULT_SIZE_LIMIT) -> Optional[CutWitness]:
    _guard(inst, size_limit)
    joint = {}
    for w in enumerate_cuts(inst.graph, inst.sender, inst.receiver):
        if w.side_b not in joint:
            joint[w.side_b] = (
                joint_structure(inst.adversary, inst.gamma, w.side_b),
                joint_view(inst.gamma, w.side_b).nodes,
            )
        zb, seen = joint[w.side_b]
        for c1, c2 in _splits(inst, w.cut):
            if _rmt_b_side_ok(inst, w.side_b, c2, zb, seen):
                return w.with_split(c1, c2)
    return None
