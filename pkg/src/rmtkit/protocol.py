"""Z-CPA player logic.

The sender floods its value and stops. A neighbour of the sender decides
on whatever the sender told it. Any other player decides on ``x`` once
the set of neighbours that sent it ``x`` is not corruptible according to
its local structure. Relays forward their decision to every neighbour
exactly once; the receiver just keeps it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

from .adversary import member
from .topology import node_key, sorted_nodes

SENDER, RECEIVER, RELAY = "sender", "receiver", "relay"


class ProtocolViolation(ValueError):
    """A message travelled over a non-edge or reached the wrong player."""


class DecisionConflict(RuntimeError):
    """Two different values became decidable in the same delivery batch.

    This cannot happen when the corrupted set is in the structure, so it
    signals an out-of-structure experiment or a modelling bug.
    """


def value_key(x):
    return node_key(x)


class ProtocolMessage(NamedTuple):
    source: object
    to: object
    value: object

    def sort_key(self):
        return (node_key(self.source), node_key(self.to), value_key(self.value))

    def to_list(self):
        return [self.source, self.to, self.value]


@dataclass(frozen=True)
class PlayerState:
    id: object
    role: str
    # ((value, frozenset of neighbours that sent it), ...), sorted by value
    support: tuple = ()
    decision: Optional[object] = None
    relayed: bool = False
    halted: bool = False

    @property
    def decided(self) -> bool:
        return self.decision is not None

    def support_for(self, x) -> frozenset:
        for value, senders in self.support:
            if value == x:
                return senders
        return frozenset()

    def support_map(self) -> dict:
        return dict(self.support)


def _role(inst, v):
    if v == inst.sender:
        return SENDER
    if v == inst.receiver:
        return RECEIVER
    return RELAY


def initial_state(inst, v) -> PlayerState:
    inst.graph.neighbors(v)
    return PlayerState(v, _role(inst, v))


def sender_initiate(inst, x) -> list:
    s = inst.sender
    return [ProtocolMessage(s, u, x) for u in sorted_nodes(inst.graph.neighbors(s))]


def sender_state(inst, x) -> PlayerState:
    return PlayerState(inst.sender, SENDER, decision=x, relayed=True, halted=True)


def _record(support, msg):
    table = dict(support)
    table[msg.value] = table.get(msg.value, frozenset()) | {msg.source}
    return tuple(sorted(table.items(), key=lambda kv: value_key(kv[0])))


def deliver(state: PlayerState, inst, msgs) -> tuple:
    """Process one round's deliveries to ``state.id``.

    Returns ``(new_state, outgoing_messages)``.
    """
    if state.halted:
        raise ProtocolViolation(f"player {state.id!r} has halted")
    g = inst.graph
    me = state.id
    support = state.support
    from_sender = None
    for msg in msgs:
        if msg.to != me:
            raise ProtocolViolation(f"message for {msg.to!r} delivered to {me!r}")
        if not g.has_edge(msg.source, me):
            raise ProtocolViolation(f"no channel between {msg.source!r} and {me!r}")
        support = _record(support, msg)
        if msg.source == inst.sender:
            from_sender = msg.value

    decision = None
    if me in g.neighbors(inst.sender):
        decision = from_sender
    else:
        local = inst.local(me)
        enabled = [x for x, senders in support if not member(local, senders)]
        if len(enabled) > 1:
            raise DecisionConflict(
                f"player {me!r} can decide on several values at once: {enabled!r}"
            )
        if enabled:
            decision = enabled[0]

    if decision is None:
        return replace(state, support=support), []
    if state.role == RELAY:
        out = [ProtocolMessage(me, u, decision) for u in sorted_nodes(g.neighbors(me))]
        return replace(state, support=support, decision=decision, relayed=True, halted=True), out
    return replace(state, support=support, decision=decision, halted=True), []


def player_receive(state: PlayerState, inst, msg: ProtocolMessage) -> tuple:
    return deliver(state, inst, [msg])
