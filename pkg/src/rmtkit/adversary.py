"""Monotone adversary structures kept as antichains of maximal sets.

A structure lives over a ground set. ``Z`` is a member iff ``Z`` is
contained in one of the maximal sets. The structure in which only the
empty set is corruptible is stored as ``{frozenset()}``, never as an
empty family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

from .topology import UnknownNodeError, node_key, set_key, sorted_nodes

EMPTY = frozenset()


class AdversaryError(ValueError):
    pass


def _maximal(family) -> frozenset:
    # largest first, so a set is only compared against possible supersets
    ordered = sorted(set(family), key=len, reverse=True)
    kept = []
    for s in ordered:
        if not any(s <= k for k in kept):
            kept.append(s)
    return frozenset(kept) if kept else frozenset([EMPTY])


def subsets(s):
    items = sorted_nodes(s)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


@dataclass(frozen=True)
class AdversaryStructure:
    ground: frozenset
    maximal_sets: frozenset

    def __post_init__(self):
        ground = frozenset(self.ground)
        family = frozenset(frozenset(m) for m in self.maximal_sets)
        for m in family:
            for v in m:
                if v not in ground:
                    raise UnknownNodeError(v, "adversary ground set")
        for v in ground:
            node_key(v)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "maximal_sets", _maximal(family))

    def __contains__(self, candidate):
        return member(self, candidate)

    def members(self) -> frozenset:
        """Full downward closure. Exponential; intended for small grounds."""
        out = set()
        for m in self.maximal_sets:
            if m in out:
                continue
            out.update(subsets(m))
        return frozenset(out)

    def is_antichain(self) -> bool:
        ms = list(self.maximal_sets)
        if not ms:
            return False
        return all(not (a < b) for a in ms for b in ms)

    def canonical(self) -> list:
        """Sorted list of sorted maximal sets."""
        return [sorted_nodes(m) for m in sorted(self.maximal_sets, key=set_key)]

    def to_dict(self) -> dict:
        return {"ground": sorted_nodes(self.ground), "maximal": self.canonical()}

    def __repr__(self):
        return f"AdversaryStructure(ground={sorted_nodes(self.ground)!r}, maximal={self.canonical()!r})"


def normalize(ground, family) -> AdversaryStructure:
    return AdversaryStructure(frozenset(ground), frozenset(frozenset(s) for s in family))


def threshold(ground, t: int, exclude=()) -> AdversaryStructure:
    """All ``t``-subsets of ``ground`` minus ``exclude`` (a t-of-n adversary)."""
    pool = sorted_nodes(frozenset(ground) - frozenset(exclude))
    t = min(t, len(pool))
    return normalize(ground, (frozenset(c) for c in itertools.combinations(pool, t)))


def member(z: AdversaryStructure, candidate) -> bool:
    candidate = frozenset(candidate)
    if not candidate <= z.ground:
        return False
    return any(candidate <= m for m in z.maximal_sets)


def restrict(z: AdversaryStructure, a) -> AdversaryStructure:
    a = frozenset(a)
    return AdversaryStructure(z.ground & a, frozenset(m & a for m in z.maximal_sets))


def join(e: AdversaryStructure, f: AdversaryStructure) -> AdversaryStructure:
    """Union of every member pair ``(Z1, Z2)`` that agrees on the overlap.

    Members are bucketed by their trace on the overlap of the two grounds.
    Inside one bucket only the maximal members can produce maximal
    unions, so each bucket is pruned to its antichain before pairing.
    """
    overlap = e.ground & f.ground
    left = _buckets(e, overlap)
    right = _buckets(f, overlap)
    unions = []
    for trace, lhs in left.items():
        rhs = right.get(trace)
        if rhs is None:
            continue
        for z1 in lhs:
            for z2 in rhs:
                unions.append(z1 | z2)
    return AdversaryStructure(e.ground | f.ground, frozenset(unions))


def _buckets(z, overlap):
    by_trace = {}
    for s in z.members():
        by_trace.setdefault(s & overlap, []).append(s)
    return {k: _maximal(v) for k, v in by_trace.items()}


def order_geq(e: AdversaryStructure, f: AdversaryStructure) -> bool:
    """``e`` is an upper bound of ``f``: joining ``f`` into ``e`` changes nothing."""
    return join(e, f) == e


def local_structure(z: AdversaryStructure, gamma, v) -> AdversaryStructure:
    return restrict(z, gamma[v].nodes)


def joint_structure(z: AdversaryStructure, gamma, b) -> AdversaryStructure:
    b = sorted_nodes(b)
    if not b:
        raise AdversaryError("joint structure of an empty node set is undefined")
    return reduce(join, (local_structure(z, gamma, v) for v in b))
