"""Synchronous executor for Z-CPA with Byzantine players.

Round 0 is the sender's flood. In round ``r >= 1`` the adversary strategy
is asked for its messages (it sees every delivery from earlier rounds),
then honest relays decided in round ``r - 1`` and the adversary's
messages are delivered together. Honest players handle their batch in
node order. The adversary is consulted up to the horizon; after that the
run continues until no honest message is in flight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .adversary import member
from .protocol import (
    ProtocolMessage,
    ProtocolViolation,
    deliver,
    initial_state,
    sender_initiate,
    sender_state,
    value_key,
)
from .topology import sorted_nodes

DELIVERED, UNDECIDED, UNSAFE = "delivered", "undecided", "unsafe"
DEFAULT_ALPHABET = (0, 1)
DEFAULT_BUDGET = 2_000_000


class InadmissibleError(ValueError):
    """Corrupted set is not in the adversary structure (or includes S/R)."""


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Verdict:
    kind: str
    value: object = None

    def __str__(self):
        return self.kind if self.kind == UNDECIDED else f"{self.kind}({self.value!r})"

    def to_dict(self):
        return {"kind": self.kind, "value": self.value}


@dataclass(frozen=True, eq=False)
class AdversaryBehavior:
    corrupted: frozenset
    strategy: Callable
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"name": self.name, "corrupted": sorted_nodes(self.corrupted), "params": self.params}


@dataclass
class ExecutionOutcome:
    verdict: Verdict
    rounds_used: int
    trace: list
    honest_decisions: dict
    admissible: bool = True
    standard: bool = True

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.to_dict(),
            "rounds_used": self.rounds_used,
            "admissible": self.admissible,
            "standard": self.standard,
            "honest_decisions": [
                [v, self.honest_decisions[v]] for v in sorted_nodes(self.honest_decisions)
            ],
            "trace": [[r, *m.to_list()] for r, m in self.trace],
        }


class Execution:
    """Mutable state of one run. ``step`` plays one round."""

    def __init__(self, inst, x, corrupted=frozenset(), record_trace=True):
        self.inst = inst
        self.x = x
        self.corrupted = frozenset(corrupted)
        self.round = 0
        self.last_delivery = 0
        self.record_trace = record_trace
        self.trace = []
        self.honest = [v for v in sorted_nodes(inst.graph.nodes) if v not in self.corrupted]
        self.states = {}
        for v in self.honest:
            if v == inst.sender:
                self.states[v] = sender_state(inst, x)
            else:
                self.states[v] = initial_state(inst, v)
        if inst.sender in self.corrupted:
            self.pending = []
        else:
            self.pending = sender_initiate(inst, x)

    def clone(self) -> "Execution":
        other = object.__new__(Execution)
        other.__dict__.update(self.__dict__)
        other.states = dict(self.states)
        other.pending = list(self.pending)
        other.trace = list(self.trace)
        return other

    def key(self):
        return (tuple(self.states[v] for v in self.honest), tuple(self.pending))

    def check_adversary_messages(self, msgs):
        g = self.inst.graph
        for m in msgs:
            if m.source not in self.corrupted:
                raise ProtocolViolation(f"adversary forged a message from honest {m.source!r}")
            if not g.has_edge(m.source, m.to):
                raise ProtocolViolation(f"no channel between {m.source!r} and {m.to!r}")

    def step(self, adversary_msgs=()):
        self.round += 1
        batch = sorted(self.pending + list(adversary_msgs), key=ProtocolMessage.sort_key)
        self.pending = []
        if not batch:
            return
        self.last_delivery = self.round
        if self.record_trace:
            self.trace.extend((self.round, m) for m in batch)
        inbox = {}
        for m in batch:
            inbox.setdefault(m.to, []).append(m)
        out = []
        for v in sorted_nodes(inbox):
            st = self.states.get(v)
            if st is None or st.halted:
                continue
            new, sent = deliver(st, self.inst, inbox[v])
            self.states[v] = new
            out.extend(sent)
        self.pending = out

    def drain(self):
        while self.pending:
            self.step()

    @property
    def receiver_decision(self):
        st = self.states.get(self.inst.receiver)
        return None if st is None else st.decision

    def verdict(self) -> Verdict:
        d = self.receiver_decision
        if d is None:
            return Verdict(UNDECIDED)
        return Verdict(DELIVERED if d == self.x else UNSAFE, d)

    def outcome(self, admissible=True, standard=True) -> ExecutionOutcome:
        decisions = {
            v: st.decision for v, st in self.states.items() if v != self.inst.sender
        }
        return ExecutionOutcome(
            self.verdict(), self.last_delivery, list(self.trace), decisions, admissible, standard
        )


def _admission(inst, corrupted, allow_inadmissible, allow_nonstandard):
    corrupted = frozenset(corrupted)
    unknown = corrupted - inst.graph.nodes
    if unknown:
        raise InadmissibleError(f"corrupted nodes not in graph: {sorted_nodes(unknown)!r}")
    admissible = member(inst.adversary, corrupted)
    standard = inst.sender not in corrupted and inst.receiver not in corrupted
    if not admissible and not allow_inadmissible:
        raise InadmissibleError(
            f"corrupted set {sorted_nodes(corrupted)!r} is not in the adversary structure "
            "(pass --allow-inadmissible for out-of-structure experiments)"
        )
    if not standard and not allow_nonstandard:
        raise InadmissibleError("sender and receiver are honest by convention")
    return admissible, standard


def run(
    inst,
    x,
    behavior: AdversaryBehavior,
    horizon: Optional[int] = None,
    allow_inadmissible=False,
    allow_nonstandard=False,
) -> ExecutionOutcome:
    admissible, standard = _admission(
        inst, behavior.corrupted, allow_inadmissible, allow_nonstandard
    )
    h = len(inst.graph.nodes) if horizon is None else horizon
    ex = Execution(inst, x, behavior.corrupted)
    while True:
        r = ex.round + 1
        adv = []
        if r <= h and behavior.corrupted:
            adv = list(behavior.strategy(r, tuple(ex.trace)))
            ex.check_adversary_messages(adv)
        if r > h and not ex.pending:
            break
        ex.step(adv)
    return ex.outcome(admissible, standard)


# -- strategies -------------------------------------------------------------


def _corrupted_edges(inst, corrupted):
    g = inst.graph
    return [(c, u) for c in sorted_nodes(corrupted) for u in sorted_nodes(g.neighbors(c))]


def silent(inst, corrupted) -> AdversaryBehavior:
    return AdversaryBehavior(frozenset(corrupted), lambda r, hist: (), "silent")


def constant_lie(inst, corrupted, value) -> AdversaryBehavior:
    msgs = tuple(ProtocolMessage(c, u, value) for c, u in _corrupted_edges(inst, corrupted))
    return AdversaryBehavior(
        frozenset(corrupted), lambda r, hist: msgs, "constant_lie", {"value": value}
    )


def equivocate(inst, corrupted, value_map) -> AdversaryBehavior:
    """Every round, each corrupted node sends ``value_map[u]`` to neighbour ``u``."""
    msgs = tuple(
        ProtocolMessage(c, u, value_map[u])
        for c, u in _corrupted_edges(inst, corrupted)
        if u in value_map
    )
    params = {"map": [[u, value_map[u]] for u in sorted_nodes(value_map)]}
    return AdversaryBehavior(frozenset(corrupted), lambda r, hist: msgs, "equivocate", params)


def delayed_lie(inst, corrupted, start, value) -> AdversaryBehavior:
    msgs = tuple(ProtocolMessage(c, u, value) for c, u in _corrupted_edges(inst, corrupted))
    return AdversaryBehavior(
        frozenset(corrupted),
        lambda r, hist: msgs if r >= start else (),
        "delayed_lie",
        {"start": start, "value": value},
    )


def scripted(corrupted, schedule) -> AdversaryBehavior:
    """Replay a fixed ``{round: [messages]}`` schedule."""
    table = {r: tuple(ms) for r, ms in schedule.items() if ms}
    params = {
        "schedule": [
            [r, [m.to_list() for m in sorted(table[r], key=ProtocolMessage.sort_key)]]
            for r in sorted(table)
        ]
    }
    return AdversaryBehavior(
        frozenset(corrupted), lambda r, hist: table.get(r, ()), "scripted", params
    )


def strategy_library() -> dict:
    return {
        "silent": silent,
        "constant_lie": constant_lie,
        "equivocate": equivocate,
        "delayed_lie": delayed_lie,
    }


# -- exhaustive search -------------------------------------------------------


@dataclass
class SearchSummary:
    any_unsafe: bool
    any_undecided: bool
    any_delivered: bool
    witness_behaviors: dict
    witness_outcomes: dict
    corrupted: frozenset
    horizon: int
    alphabet: tuple
    behaviors_covered: int
    states_explored: int
    transitions: int

    def to_dict(self) -> dict:
        return {
            "corrupted": sorted_nodes(self.corrupted),
            "any_unsafe": self.any_unsafe,
            "any_undecided": self.any_undecided,
            "any_delivered": self.any_delivered,
            "horizon": self.horizon,
            "alphabet": list(self.alphabet),
            "behaviors_covered": self.behaviors_covered,
            "states_explored": self.states_explored,
            "transitions": self.transitions,
            "witnesses": {
                k: {
                    "behavior": self.witness_behaviors[k].describe(),
                    "verdict": self.witness_outcomes[k].verdict.to_dict(),
                }
                for k in sorted(self.witness_behaviors)
            },
        }


def behavior_space_size(inst, corrupted, alphabet, horizon) -> int:
    """Number of open-loop behaviors: one symbol or silence per edge per round."""
    return (len(alphabet) + 1) ** (len(_corrupted_edges(inst, corrupted)) * horizon)


def exhaustive_search(
    inst,
    x,
    corrupted,
    alphabet=DEFAULT_ALPHABET,
    horizon: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    allow_inadmissible=False,
) -> SearchSummary:
    """Explore every behavior in which each corrupted node sends each
    neighbour one alphabet symbol or nothing, every round up to ``horizon``.

    Honest players are deterministic, so an adaptive adversary can do no
    more than some fixed schedule. Schedules are explored breadth first
    over global states: schedules that lead to the same state in the same
    round are merged, and sends that cannot change any honest state
    (to halted players, to the sender's neighbours, or repeating a value
    already recorded) are skipped. The set of reachable verdicts is the
    same as enumerating every schedule one by one.

    ``budget`` caps the number of simulated round transitions.
    """
    corrupted = frozenset(corrupted)
    _admission(inst, corrupted, allow_inadmissible, False)
    h = len(inst.graph.nodes) if horizon is None else horizon
    alphabet = tuple(sorted(set(alphabet), key=value_key))
    g = inst.graph
    rule_one = g.neighbors(inst.sender)
    targets = [
        (c, u)
        for c, u in _corrupted_edges(inst, corrupted)
        if u not in corrupted and u != inst.sender and u not in rule_one
    ]

    start = Execution(inst, x, corrupted, record_trace=False)
    frontier = {start.key(): start}
    parents = [{start.key(): None}]
    found = {}  # verdict kind -> (layer, key)
    transitions = 0
    states = 1

    def note(kind, layer, key):
        if kind not in found:
            found[kind] = (layer, key)

    for r in range(1, h + 1):
        layer = {}
        nxt = {}
        for key, ex in frontier.items():
            options = []
            for c, u in targets:
                st = ex.states[u]
                opts = [None]
                if not st.halted:
                    opts.extend(y for y in alphabet if c not in st.support_for(y))
                options.append(opts)
            for combo in itertools.product(*options):
                msgs = [
                    ProtocolMessage(c, u, y) for (c, u), y in zip(targets, combo) if y is not None
                ]
                child = ex.clone()
                child.step(msgs)
                transitions += 1
                if transitions > budget:
                    raise BudgetExceeded(
                        f"exhaustive search exceeded {budget} transitions; "
                        "shrink the horizon or alphabet, or use the static strategy library"
                    )
                ck = child.key()
                if ck in layer:
                    continue
                layer[ck] = (key, msgs)
                states += 1
                if child.receiver_decision is not None:
                    note(child.verdict().kind, r, ck)
                else:
                    nxt[ck] = child
        parents.append(layer)
        frontier = nxt
        if not frontier:
            break

    for key, ex in frontier.items():
        ex.drain()
        note(ex.verdict().kind, len(parents) - 1, key)

    behaviors, outcomes = {}, {}
    for kind, (layer_idx, key) in found.items():
        schedule = {}
        while layer_idx > 0:
            prev, msgs = parents[layer_idx][key]
            schedule[layer_idx] = msgs
            key = prev
            layer_idx -= 1
        beh = scripted(corrupted, schedule)
        out = run(inst, x, beh, horizon=h, allow_inadmissible=allow_inadmissible)
        if out.verdict.kind != kind:
            raise AssertionError(
                f"replayed witness gave {out.verdict} but the search expected {kind}"
            )
        behaviors[kind] = beh
        outcomes[kind] = out

    return SearchSummary(
        any_unsafe=UNSAFE in found,
        any_undecided=UNDECIDED in found,
        any_delivered=DELIVERED in found,
        witness_behaviors=behaviors,
        witness_outcomes=outcomes,
        corrupted=corrupted,
        horizon=h,
        alphabet=alphabet,
        behaviors_covered=behavior_space_size(inst, corrupted, alphabet, h),
        states_explored=states,
        transitions=transitions,
    )
