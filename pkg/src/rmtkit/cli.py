"""``rmtkit`` command line.

Every command prints one JSON report on stdout. Exit statuses:

    0  success (``run``: receiver delivered the sender's value)
    1  ``verify`` found failing instances
    2  usage, parse, model or size-limit error
    3  ``run``: receiver undecided
    4  ``run``: receiver decided a wrong value
    5  corrupted set not in the adversary structure
    6  two values became decidable at once (out-of-structure run)
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import adversary as adv
from .cuts import DEFAULT_SIZE_LIMIT, InstanceError, NotAdHocError, SizeLimitError, find_rmt_cut, find_zpp_cut
from .engine import (
    DEFAULT_BUDGET,
    DELIVERED,
    UNDECIDED,
    UNSAFE,
    InadmissibleError,
    run,
    strategy_library,
)
from .fileformat import (
    FileFormatError,
    dumps_instance,
    dumps_structure,
    instance_digest,
    read_instance,
    read_structure,
)
from .generate import GeneratorError, GeneratorSpec, generate_instances, named_instances
from .protocol import DecisionConflict, ProtocolViolation
from .topology import TopologyError
from .verify import FAIL, summarize, verify_instance

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2
EXIT_UNDECIDED = 3
EXIT_UNSAFE = 4
EXIT_INADMISSIBLE = 5
EXIT_CONFLICT = 6

VERDICT_EXIT = {DELIVERED: EXIT_OK, UNDECIDED: EXIT_UNDECIDED, UNSAFE: EXIT_UNSAFE}


class UsageError(Exception):
    pass


def parse_token(text):
    """``"1"`` -> 1, anything else stays a string."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return text


def parse_alphabet(text):
    values = [parse_token(t) for t in text.split(",") if t.strip()]
    if not values:
        raise argparse.ArgumentTypeError("alphabet must contain at least one value")
    return tuple(values)


def parse_param(text):
    key, sep, raw = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _global_flags(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--size-limit", type=int, default=d(DEFAULT_SIZE_LIMIT),
                        help="largest node count for exhaustive cut search")
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--allow-inadmissible", action="store_true", default=d(False),
                        help="permit corrupted sets outside the structure")
    parser.add_argument("--horizon", type=int, default=d(None),
                        help="last round in which the adversary may send (default |V|)")
    parser.add_argument("--alphabet", type=parse_alphabet, default=d((0, 1)),
                        help="comma separated message values, e.g. 0,1")
    parser.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET),
                        help="transition budget per exhaustive search")
    parser.add_argument("--workers", type=int, default=d(1))


def _generator_flags(parser):
    parser.add_argument("--count", type=int, default=None)
    parser.add_argument("--min-nodes", type=int, default=None)
    parser.add_argument("--max-nodes", type=int, default=None)
    parser.add_argument("--density", type=float, default=None)
    parser.add_argument("--family", choices=("random", "threshold"), default=None)
    parser.add_argument("--t", type=int, default=None)
    parser.add_argument("--num-sets", type=int, default=None)
    parser.add_argument("--max-set-size", type=int, default=None)
    parser.add_argument("--view-mode", choices=("ad_hoc", "full", "random"), default=None)
    parser.add_argument("--spec", type=Path, default=None,
                        help="JSON file with generator parameters")


def build_parser():
    parser = argparse.ArgumentParser(prog="rmtkit", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    p = sub.add_parser("check", parents=[common], help="search for a Z-pp cut or RMT-cut")
    p.add_argument("instance", type=Path)
    p.add_argument("--model", choices=("zpp", "rmt"), default="zpp")

    p = sub.add_parser("run", parents=[common], help="simulate one Z-CPA execution")
    p.add_argument("instance", type=Path)
    p.add_argument("--value", type=parse_token, default=0)
    p.add_argument("--strategy", default="silent", help=", ".join(strategy_library()))
    p.add_argument("--param", type=parse_param, action="append", default=[],
                   help="strategy parameter key=value (value parsed as JSON when possible)")
    p.add_argument("--corrupted", default="", help="comma separated node ids")

    p = sub.add_parser("verify", parents=[common], help="check Z-CPA against the cut condition")
    p.add_argument("instances", type=Path, nargs="*", help="instance files")
    p.add_argument("--named", action="store_true", help="use the built-in named instances")
    p.add_argument("--value", type=parse_token, default=0)
    p.add_argument("--dump-dir", type=Path, default=None,
                   help="write reproducer files for failing instances here")
    _generator_flags(p)

    p = sub.add_parser("algebra", parents=[common], help="adversary structure operations")
    p.add_argument("op", choices=("join", "restrict", "member", "geq"))
    p.add_argument("structures", type=Path, nargs="+")
    p.add_argument("--set", dest="node_set", default=None,
                   help="JSON list of node ids for restrict/member")

    p = sub.add_parser("gen", parents=[common], help="write generated instance files")
    p.add_argument("--out", type=Path, required=True)
    _generator_flags(p)
    return parser


def _generator_spec(args):
    base = {}
    if args.spec is not None:
        try:
            base = json.loads(args.spec.read_text())
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{args.spec}:{exc.lineno}:{exc.colno}", exc.msg) from None
    overrides = {
        "count": args.count,
        "min_nodes": args.min_nodes,
        "max_nodes": args.max_nodes,
        "density": args.density,
        "family": args.family,
        "t": args.t,
        "num_sets": args.num_sets,
        "max_set_size": args.max_set_size,
        "view_mode": args.view_mode,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    return GeneratorSpec.from_dict(base)


def _corrupted(text, inst):
    ids = [parse_token(t) for t in text.split(",") if t.strip()]
    # ids typed as ints on the command line may be string ids in the file
    out = set()
    for v in ids:
        if v not in inst.graph.nodes and str(v) in inst.graph.nodes:
            v = str(v)
        if v not in inst.graph.nodes:
            raise UsageError(f"corrupted node {v!r} is not in the instance")
        out.add(v)
    return frozenset(out)


def cmd_check(args):
    inst = read_instance(args.instance)
    if args.model == "zpp":
        w = find_zpp_cut(inst, size_limit=args.size_limit)
    else:
        w = find_rmt_cut(inst, size_limit=args.size_limit)
    results = {"model": args.model, "found": w is not None, "witness": None if w is None else w.to_dict()}
    return EXIT_OK, instance_digest(inst), results


def cmd_run(args):
    inst = read_instance(args.instance)
    library = strategy_library()
    if args.strategy not in library:
        raise UsageError(f"unknown strategy {args.strategy!r}; choose from {', '.join(library)}")
    params = dict(args.param)
    corrupted = _corrupted(args.corrupted, inst)
    if args.strategy == "equivocate" and isinstance(params.get("value_map"), dict):
        params["value_map"] = {
            (k if k in inst.graph.nodes else parse_token(k)): v
            for k, v in params["value_map"].items()
        }
    try:
        behavior = library[args.strategy](inst, corrupted, **params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {args.strategy}: {exc}") from None
    outcome = run(
        inst,
        args.value,
        behavior,
        horizon=args.horizon,
        allow_inadmissible=args.allow_inadmissible,
    )
    results = {"value": args.value, "behavior": behavior.describe(), **outcome.to_dict()}
    return VERDICT_EXIT[outcome.verdict.kind], instance_digest(inst), results


def _verify_one(job):
    inst, x, alphabet, horizon, budget, size_limit = job
    return verify_instance(inst, x, alphabet, horizon, budget, size_limit)


def cmd_verify(args):
    if args.named:
        suite = named_instances()
    elif args.instances:
        suite = [read_instance(p) for p in args.instances]
    else:
        suite = generate_instances(_generator_spec(args), args.seed)
    jobs = [(i, args.value, args.alphabet, args.horizon, args.budget, args.size_limit) for i in suite]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            records = list(pool.map(_verify_one, jobs))
    else:
        records = [_verify_one(j) for j in jobs]

    if args.dump_dir is not None:
        for inst, rec in zip(suite, records):
            if rec["status"] == FAIL:
                args.dump_dir.mkdir(parents=True, exist_ok=True)
                path = args.dump_dir / f"{inst.name or rec['digest'][:12]}.json"
                path.write_text(dumps_instance(inst))
                rec["reproducer"] = str(path)
    summary = summarize(records)
    digest = hashlib.sha256("".join(r["digest"] for r in records).encode()).hexdigest()
    results = {"summary": summary, "instances": records}
    return (EXIT_FAILED if summary["failed"] else EXIT_OK), digest, results


def cmd_algebra(args):
    zs = [read_structure(p) for p in args.structures]
    digest = hashlib.sha256("".join(dumps_structure(z) for z in zs).encode()).hexdigest()
    node_set = None
    if args.node_set is not None:
        try:
            raw = json.loads(args.node_set)
        except json.JSONDecodeError as exc:
            raise FileFormatError("--set", exc.msg) from None
        if not isinstance(raw, list):
            raise FileFormatError("--set", "expected a JSON list of node ids")
        node_set = frozenset(raw)

    if args.op in ("join", "geq"):
        if len(zs) != 2:
            raise UsageError(f"{args.op} takes exactly two structure files")
        if args.op == "join":
            return EXIT_OK, digest, {"op": "join", "structure": adv.join(*zs).to_dict()}
        return EXIT_OK, digest, {"op": "geq", "result": adv.order_geq(*zs)}
    if len(zs) != 1:
        raise UsageError(f"{args.op} takes exactly one structure file")
    if node_set is None:
        raise UsageError(f"{args.op} needs --set")
    if args.op == "restrict":
        return EXIT_OK, digest, {"op": "restrict", "structure": adv.restrict(zs[0], node_set).to_dict()}
    return EXIT_OK, digest, {"op": "member", "result": adv.member(zs[0], node_set)}


def cmd_gen(args):
    spec = _generator_spec(args)
    suite = generate_instances(spec, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    written = []
    for inst in suite:
        path = args.out / f"{inst.name}.json"
        path.write_text(dumps_instance(inst))
        written.append({"file": str(path), "digest": instance_digest(inst)})
    digest = hashlib.sha256("".join(w["digest"] for w in written).encode()).hexdigest()
    return EXIT_OK, digest, {"spec": spec.to_dict(), "seed": args.seed, "written": written}


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "verify": cmd_verify,
    "algebra": cmd_algebra,
    "gen": cmd_gen,
}


def render(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def main(argv=None, out=None):
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        code, digest, results = COMMANDS[args.command](args)
    except InadmissibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except DecisionConflict as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except NotAdHocError as exc:
        print(f"error: not an ad hoc instance ({exc})", file=sys.stderr)
        return EXIT_ERROR
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (FileFormatError, GeneratorError, InstanceError, TopologyError,
            ProtocolViolation, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = {
        "command": ["rmtkit", *argv],
        "instance_digest": digest,
        "results": results,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }
    print(render(report), file=out)
    return code
