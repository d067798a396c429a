"""JSON structure files.

Elements are referenced by index; labels are cosmetic.  A document::

    {"format": "roughtop-structure", "version": 1,
     "universe": {"size": 6},
     "op": {"kind": "zn_add", "k": 6},
     "partition": [[0, 1, 2], [3, 4, 5]],
     "subset": [2, 3, 4],
     "topology": {"kind": "open_sets", "sets": [[], [2], [4], [2, 4], [2, 3, 4], [0, 1, 2, 3, 4, 5]]}}

``topology.kind`` may also be ``min_opens`` (``{"map": {"3": [2, 3, 4], ...}}``)
or ``discrete``.  Serialisation always writes ``min_opens``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import ApproximationSpace, OpTable, Partition, Universe, bits, members
from .errors import RoughTopError, StructureFileError
from .fintop import Topology, topology_from_open_sets
from .trg import RoughStructure

FORMAT = "roughtop-structure"
VERSION = 1


def _req(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise StructureFileError("expected an object", path)
    if key not in obj:
        raise StructureFileError(f"missing key {key!r}", path)
    val = obj[key]
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is int:
        raise StructureFileError(f"expected {kind.__name__}", f"{path}.{key}")
    return val


def _index_list(val, n, path) -> list[int]:
    if not isinstance(val, list):
        raise StructureFileError("expected a list of element indices", path)
    out = []
    for i, v in enumerate(val):
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
            raise StructureFileError(f"{v!r} is not an element index below {n}", f"{path}[{i}]")
        out.append(v)
    return out


def _parse_op(obj, n, path) -> OpTable:
    kind = _req(obj, "kind", path, str)
    try:
        if kind == "zn_add":
            k = _req(obj, "k", path, int)
            op = OpTable.zn_add(k)
        elif kind == "mod_mul":
            p = _req(obj, "p", path, int)
            op = OpTable.mod_mul(p)
        elif kind == "table":
            rows = _req(obj, "table", path, list)
            op = OpTable(rows)
        else:
            raise StructureFileError(f"unknown op kind {kind!r}", f"{path}.kind")
    except RoughTopError as exc:
        if isinstance(exc, StructureFileError):
            raise
        raise StructureFileError(str(exc), path) from None
    except TypeError:
        raise StructureFileError("operation table must be a list of integer rows", path) from None
    if op.size != n:
        raise StructureFileError(f"operation has {op.size} elements but the universe has {n}", path)
    return op


def _parse_topology(obj, carrier, n, path) -> Topology:
    kind = _req(obj, "kind", path, str)
    try:
        if kind == "discrete":
            return Topology.discrete(carrier)
        if kind == "open_sets":
            sets = _req(obj, "sets", path, list)
            masks = [bits(_index_list(S, n, f"{path}.sets[{i}]")) for i, S in enumerate(sets)]
            return topology_from_open_sets(carrier, masks)
        if kind == "min_opens":
            raw = _req(obj, "map", path, dict)
            mo = {}
            for key, val in raw.items():
                try:
                    x = int(key)
                except ValueError:
                    raise StructureFileError(f"key {key!r} is not an element index",
                                             f"{path}.map") from None
                mo[x] = bits(_index_list(val, n, f"{path}.map[{key!r}]"))
            if set(mo) != set(members(carrier)):
                raise StructureFileError("min_opens must list exactly the points of upper(G)",
                                         f"{path}.map")
            return Topology(carrier, mo)
    except StructureFileError:
        raise
    except RoughTopError as exc:
        raise StructureFileError(str(exc), path) from None
    raise StructureFileError(f"unknown topology kind {kind!r}", f"{path}.kind")


def from_dict(doc) -> RoughStructure:
    if not isinstance(doc, dict):
        raise StructureFileError("top level must be an object", "$")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise StructureFileError(f"unknown format {fmt!r}", "$.format")
    if doc.get("version", VERSION) != VERSION:
        raise StructureFileError(f"unsupported version {doc.get('version')!r}", "$.version")
    uni = _req(doc, "universe", "$", dict)
    n = _req(uni, "size", "$.universe", int)
    if n < 1:
        raise StructureFileError("size must be positive", "$.universe.size")
    labels = uni.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise StructureFileError(f"labels must be a list of {n} names", "$.universe.labels")
    op = _parse_op(_req(doc, "op", "$", dict), n, "$.op")
    if labels is None:
        labels = op.labels()
    universe = Universe(n, tuple(str(v) for v in labels) if labels else None)

    blocks_raw = _req(doc, "partition", "$", list)
    blocks = [bits(_index_list(b, n, f"$.partition[{i}]")) for i, b in enumerate(blocks_raw)]
    try:
        partition = Partition(n, blocks)
    except RoughTopError as exc:
        raise StructureFileError(str(exc), "$.partition") from None
    G = bits(_index_list(_req(doc, "subset", "$", list), n, "$.subset"))
    if not G:
        raise StructureFileError("subset must be non-empty", "$.subset")
    space = ApproximationSpace(universe, partition)
    carrier = space.upper(G)
    tau = _parse_topology(_req(doc, "topology", "$", dict), carrier, n, "$.topology")
    return RoughStructure(space, op, G, tau)


def loads(text: str) -> RoughStructure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureFileError(exc.msg, f"{exc.lineno}:{exc.colno}") from None
    return from_dict(doc)


def load(path) -> RoughStructure:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StructureFileError(str(exc)) from None
    try:
        return loads(text)
    except StructureFileError as exc:
        raise StructureFileError(str(exc), str(path)) from None


def _op_dict(op: OpTable) -> dict:
    if op.kind == "zn_add" and op == OpTable.zn_add(op.param):
        return {"kind": "zn_add", "k": op.param}
    if op.kind == "mod_mul" and op == OpTable.mod_mul(op.param):
        return {"kind": "mod_mul", "p": op.param}
    return {"kind": "table", "table": [list(r) for r in op.table]}


def to_dict(s: RoughStructure) -> dict:
    uni = s.space.universe
    doc = {"format": FORMAT, "version": VERSION, "universe": {"size": uni.size}}
    if uni.labels and tuple(uni.labels) != s.op.labels():
        doc["universe"]["labels"] = list(uni.labels)
    doc["op"] = _op_dict(s.op)
    doc["partition"] = s.space.partition.as_lists()
    doc["subset"] = list(members(s.G))
    doc["topology"] = {"kind": "min_opens",
                       "map": {str(x): list(members(s.tau.mo[x])) for x in members(s.tau.carrier)}}
    return doc


def dumps(s: RoughStructure) -> str:
    """One top-level key per line, values written compactly."""
    doc = to_dict(s)
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v)}" for k, v in doc.items())
    return "{\n" + body + "\n}\n"


def dump(s: RoughStructure, path) -> None:
    Path(path).write_text(dumps(s))


__all__ = ["load", "loads", "dump", "dumps", "to_dict", "from_dict", "FORMAT", "VERSION"]
