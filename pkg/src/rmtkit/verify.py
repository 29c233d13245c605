"""Check Z-CPA against the cut characterisation on ad hoc instances.

For an instance without a Z-pp cut, every maximal corrupted set must be
unable to stop or fool the receiver. For an instance with a cut, the
adversary owning ``C1`` must be able to keep the receiver undecided, and
still never make it decide wrongly.
"""

from __future__ import annotations

from .cuts import DEFAULT_SIZE_LIMIT, SizeLimitError, find_zpp_cut
from .engine import (
    DEFAULT_ALPHABET,
    DEFAULT_BUDGET,
    BudgetExceeded,
    exhaustive_search,
)
from .fileformat import instance_digest
from .topology import set_key, sorted_nodes

PASS, FAIL, SKIP = "pass", "fail", "skipped"


def corrupted_sets(inst) -> list:
    """Maximal corruptible sets with S and R removed, deduplicated."""
    drop = {inst.sender, inst.receiver}
    sets = {m - drop for m in inst.adversary.maximal_sets}
    return sorted(sets, key=set_key)


def verify_instance(
    inst,
    x=0,
    alphabet=DEFAULT_ALPHABET,
    horizon=None,
    budget=DEFAULT_BUDGET,
    size_limit=DEFAULT_SIZE_LIMIT,
) -> dict:
    """Run the check for one instance; returns a JSON-ready record."""
    rec = {"name": inst.name, "digest": instance_digest(inst)}
    if not inst.is_ad_hoc:
        rec.update(status=SKIP, reason="not an ad hoc instance")
        return rec
    try:
        w = find_zpp_cut(inst, size_limit=size_limit)
    except SizeLimitError as exc:
        rec.update(status=SKIP, reason=str(exc))
        return rec
    rec["zpp_cut"] = None if w is None else w.to_dict()
    targets = corrupted_sets(inst) if w is None else [w.part1]
    searches = []
    try:
        for t in targets:
            searches.append(exhaustive_search(inst, x, t, alphabet, horizon, budget))
    except BudgetExceeded as exc:
        rec.update(status=SKIP, reason=str(exc))
        return rec

    problems = []
    for s in searches:
        label = sorted_nodes(s.corrupted)
        if s.any_unsafe:
            problems.append(f"unsafe verdict with corrupted {label!r}")
        if w is None and s.any_undecided:
            problems.append(f"receiver blocked by {label!r} although no Z-pp cut exists")
    if w is not None and not searches[0].any_undecided:
        problems.append("a Z-pp cut exists but no behavior of C1 blocks the receiver")
    rec["searches"] = [s.to_dict() for s in searches]
    rec["status"] = FAIL if problems else PASS
    if problems:
        rec["problems"] = problems
    return rec


def summarize(records) -> dict:
    counts = {PASS: 0, FAIL: 0, SKIP: 0}
    for r in records:
        counts[r["status"]] += 1
    with_cut = sum(1 for r in records if r.get("zpp_cut") is not None and r["status"] != SKIP)
    without = sum(1 for r in records if "zpp_cut" in r and r["zpp_cut"] is None and r["status"] != SKIP)
    unsafe = sum(
        1 for r in records for s in r.get("searches", ()) if s["any_unsafe"]
    )
    return {
        "instances": len(records),
        "passed": counts[PASS],
        "failed": counts[FAIL],
        "skipped": counts[SKIP],
        "with_cut": with_cut,
        "without_cut": without,
        "searches": sum(len(r.get("searches", ())) for r in records),
        "unsafe_searches": unsafe,
    }
