"""JSON instance and structure files.

Instance file::

    {
      "nodes": ["R", "S", "u"],
      "edges": [["R", "u"], ["S", "u"]],
      "adversary_maximal": [["u"]],
      "views": "ad_hoc",
      "sender": "S",
      "receiver": "R"
    }

``views`` is ``"ad_hoc"``, ``"full"`` or an object mapping each node id
(as a string) to ``{"nodes": [...], "edges": [...]}``. Structure files
are ``{"ground": [...], "maximal": [[...], ...]}``. Serialization sorts
every list, so parse/serialize round-trips byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .adversary import AdversaryStructure
from .cuts import Instance, InstanceError
from .topology import (
    Graph,
    TopologyError,
    ViewFunction,
    ad_hoc_view,
    full_view,
    sorted_edges,
    sorted_nodes,
)


class FileFormatError(ValueError):
    def __init__(self, where, message):
        super().__init__(f"{where}: {message}")
        self.where = where


def _load(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _node(value, where, known=None):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise FileFormatError(where, f"node id must be a string or integer, got {value!r}")
    if known is not None and value not in known:
        raise FileFormatError(where, f"unknown node {value!r}")
    return value


def _list(value, where):
    if not isinstance(value, list):
        raise FileFormatError(where, f"expected a list, got {type(value).__name__}")
    return value


def _node_set(value, where, known):
    items = [_node(v, f"{where}[{i}]", known) for i, v in enumerate(_list(value, where))]
    return frozenset(items)


def _edges(value, where, known):
    out = set()
    for i, e in enumerate(_list(value, where)):
        w = f"{where}[{i}]"
        if not isinstance(e, list) or len(e) != 2:
            raise FileFormatError(w, "an edge is a list of two node ids")
        u, v = (_node(x, f"{w}[{j}]", known) for j, x in enumerate(e))
        if u == v:
            raise FileFormatError(w, f"self-loop on {u!r}")
        out.add(frozenset((u, v)))
    return frozenset(out)


def _field(obj, name, where="instance"):
    if not isinstance(obj, dict):
        raise FileFormatError(where, "expected a JSON object")
    if name not in obj:
        raise FileFormatError(f"{where}.{name}" if where != "instance" else name, "missing field")
    return obj[name]


def instance_from_obj(obj, name="") -> Instance:
    raw_nodes = _list(_field(obj, "nodes"), "nodes")
    nodes = []
    for i, v in enumerate(raw_nodes):
        v = _node(v, f"nodes[{i}]")
        if v in nodes:
            raise FileFormatError(f"nodes[{i}]", f"duplicate node {v!r}")
        nodes.append(v)
    known = frozenset(nodes)
    edges = _edges(_field(obj, "edges"), "edges", known)
    g = Graph(known, edges)

    family = []
    for i, m in enumerate(_list(_field(obj, "adversary_maximal"), "adversary_maximal")):
        family.append(_node_set(m, f"adversary_maximal[{i}]", known))
    z = AdversaryStructure(known, frozenset(family))

    views = _field(obj, "views")
    if views == "ad_hoc":
        gamma = ad_hoc_view(g)
    elif views == "full":
        gamma = full_view(g)
    elif isinstance(views, dict):
        by_name = {}
        for v in nodes:
            if str(v) in by_name:
                raise FileFormatError("views", f"node ids {by_name[str(v)]!r} and {v!r} collide as keys")
            by_name[str(v)] = v
        table = {}
        for key, sub in views.items():
            w = f"views.{key}"
            if key not in by_name:
                raise FileFormatError(w, f"unknown node {key!r}")
            sub_nodes = _node_set(_field(sub, "nodes", w), f"{w}.nodes", known)
            sub_edges = _edges(_field(sub, "edges", w), f"{w}.edges", known)
            try:
                table[by_name[key]] = Graph(sub_nodes, sub_edges)
            except TopologyError as exc:
                raise FileFormatError(w, str(exc)) from None
        try:
            gamma = ViewFunction(table)
            gamma.validate(g)
        except TopologyError as exc:
            raise FileFormatError("views", str(exc)) from None
    else:
        raise FileFormatError("views", 'expected "ad_hoc", "full" or an object')

    s = _node(_field(obj, "sender"), "sender", known)
    r = _node(_field(obj, "receiver"), "receiver", known)
    try:
        return Instance(g, z, gamma, s, r, name)
    except (InstanceError, TopologyError) as exc:
        raise FileFormatError("instance", str(exc)) from None


def instance_to_obj(inst: Instance) -> dict:
    g = inst.graph
    if inst.gamma == ad_hoc_view(g):
        views = "ad_hoc"
    elif inst.gamma == full_view(g):
        views = "full"
    else:
        views = {
            str(v): {
                "nodes": sorted_nodes(inst.gamma[v].nodes),
                "edges": [list(e) for e in sorted_edges(inst.gamma[v].edges)],
            }
            for v in sorted_nodes(g.nodes)
        }
    return {
        "nodes": sorted_nodes(g.nodes),
        "edges": [list(e) for e in sorted_edges(g.edges)],
        "adversary_maximal": inst.adversary.canonical(),
        "views": views,
        "sender": inst.sender,
        "receiver": inst.receiver,
    }


def _compact(value):
    return json.dumps(value, separators=(", ", ": "))


def _rows(items, indent):
    if not items:
        return "[]"
    pad = " " * indent
    body = ",\n".join(pad + "  " + _compact(x) for x in items)
    return "[\n" + body + "\n" + pad + "]"


def dumps_instance(inst: Instance) -> str:
    """Canonical text: flat lists on one line, one edge or set per line."""
    obj = instance_to_obj(inst)
    lines = []
    for key, value in obj.items():
        if key in ("edges", "adversary_maximal"):
            text = _rows(value, 2)
        elif key == "views" and isinstance(value, dict):
            inner = []
            for v, sub in value.items():
                inner.append(
                    f'    {_compact(v)}: {{\n'
                    f'      "nodes": {_compact(sub["nodes"])},\n'
                    f'      "edges": {_rows(sub["edges"], 6)}\n'
                    f"    }}"
                )
            text = "{\n" + ",\n".join(inner) + "\n  }"
        else:
            text = _compact(value)
        lines.append(f"  {_compact(key)}: {text}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def loads_instance(text, source="<string>", name="") -> Instance:
    return instance_from_obj(_load(text, source), name)


def read_instance(path) -> Instance:
    path = Path(path)
    return loads_instance(path.read_text(), str(path), path.stem)


def write_instance(inst: Instance, path):
    Path(path).write_text(dumps_instance(inst))


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(dumps_instance(inst).encode()).hexdigest()


def structure_from_obj(obj, where="structure") -> AdversaryStructure:
    ground = []
    for i, v in enumerate(_list(_field(obj, "ground", where), f"{where}.ground")):
        ground.append(_node(v, f"{where}.ground[{i}]"))
    known = frozenset(ground)
    family = [
        _node_set(m, f"{where}.maximal[{i}]", known)
        for i, m in enumerate(_list(_field(obj, "maximal", where), f"{where}.maximal"))
    ]
    return AdversaryStructure(known, frozenset(family))


def dumps_structure(z: AdversaryStructure) -> str:
    d = z.to_dict()
    return (
        "{\n"
        f'  "ground": {_compact(d["ground"])},\n'
        f'  "maximal": {_rows(d["maximal"], 2)}\n'
        "}\n"
    )


def read_structure(path) -> AdversaryStructure:
    path = Path(path)
    return structure_from_obj(_load(path.read_text(), str(path)), path.name)


def node_set_from_json(text, known=None, where="set") -> frozenset:
    return _node_set(_load(text, where), where, known)

