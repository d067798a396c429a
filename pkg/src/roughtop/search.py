"""Budgeted witness search over partitions, subsets and topologies."""

from __future__ import annotations

import random
import re
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .core import ApproximationSpace, RoughGroup
from .enumeration import PARTITION_CAP, TOPOLOGY_CAP, digest, raw_digest, topologies_on
from .errors import BudgetExhausted, CapExceeded, RoughTopError
from .predicate import evaluate, evaluate_full, optimize, parse_predicate, partial_eval
from .streams import PRIMES, _op, _partitions, parse_op, universe_for
from .structfile import dumps, from_dict, to_dict
from .trg import RoughStructure

DEFAULT_BUDGET = 10 ** 8
DEFAULT_SECONDS = 60.0
AUDIT_RATE = 0.01
MODES = ("first", "all", "count")


def parse_range(text: str) -> tuple[int, int]:
    """``"6"``, ``"2-5"`` or ``"2..5"``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:-|\.\.)\s*(\d+))?\s*", str(text))
    if not m:
        raise RoughTopError(f"bad n range {text!r}; use N, A-B or A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 1 or hi < lo:
        raise RoughTopError(f"empty n range {text!r}")
    return lo, hi


def expand_ops(family: str, lo: int, hi: int) -> list[str]:
    """Concrete op specs for a family string over the size range."""
    if family == "zn_add":
        return [f"zn_add:{k}" for k in range(lo, hi + 1)]
    if family == "mod_mul":
        return [f"mod_mul:{p}" for p in PRIMES if lo <= p - 1 <= hi]
    op = parse_op(family)
    if not lo <= op.size <= hi:
        raise RoughTopError(f"{family} has {op.size} elements, outside the range {lo}..{hi}")
    return [family]


@dataclass(frozen=True)
class SearchSpec:
    op: str
    n: tuple[int, int]
    where: str
    mode: str = "first"
    budget: int = DEFAULT_BUDGET
    seconds: float = DEFAULT_SECONDS
    audit_rate: float = AUDIT_RATE

    def __post_init__(self):
        if self.mode not in MODES:
            raise RoughTopError(f"mode must be one of {', '.join(MODES)}")
        lo, hi = self.n
        if hi > PARTITION_CAP:
            raise CapExceeded(f"partitions are enumerated for n <= {PARTITION_CAP}")
        if hi > TOPOLOGY_CAP:
            raise CapExceeded(f"topologies are enumerated for n <= {TOPOLOGY_CAP}")
        parse_predicate(self.where)

    def ops(self) -> list[str]:
        return expand_ops(self.op, *self.n)


@dataclass
class SearchStats:
    nodes: int = 0
    pruned: int = 0
    audited: int = 0
    audit_mismatches: int = 0
    seconds: float = 0.0

    def add(self, other: "SearchStats"):
        self.nodes += other.nodes
        self.pruned += other.pruned
        self.audited += other.audited
        self.audit_mismatches += other.audit_mismatches

    def as_dict(self, timing: bool = True) -> dict:
        d = {"nodes": self.nodes, "pruned": self.pruned, "audited": self.audited,
             "audit_mismatches": self.audit_mismatches}
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class Witness:
    n: int
    digest: str
    doc: dict

    def structure(self) -> RoughStructure:
        return from_dict(self.doc)


@dataclass
class SearchResult:
    spec: SearchSpec
    witnesses: list[Witness] = field(default_factory=list)
    count: int = 0
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.count > 0

    def digests(self) -> list[str]:
        return [w.digest for w in self.witnesses]


def _digest(s: RoughStructure) -> str:
    try:
        return digest(s)
    except CapExceeded:
        return raw_digest(s.op.table, s.space.partition.blocks, s.G, s.tau.key)


def _search_shard(args) -> tuple[list[tuple[int, str, dict]], SearchStats, bool]:
    """One (op, partition) shard.  Returns witnesses in visit order."""
    op_name, pi, where, mode, budget, deadline, audit_rate = args
    expr = optimize(parse_predicate(where))
    op = _op(op_name)
    space = ApproximationSpace(universe_for(op), _partitions(op.size)[pi])
    rng = random.Random(zlib.crc32(f"{op_name}/{pi}/{where}".encode()))
    stats = SearchStats()
    found: dict[str, tuple[int, str, dict]] = {}
    exhausted = False
    for G in range(1, 1 << op.size):
        group = RoughGroup(space, op, G)
        pre = partial_eval(expr, group)
        if pre is False:
            stats.pruned += 1
            continue
        for tau in topologies_on(group.upper):
            if stats.nodes >= budget or time.monotonic() > deadline:
                exhausted = True
                break
            stats.nodes += 1
            s = RoughStructure(space, op, G, tau, group=group)
            ok = True if pre is True else evaluate(expr, s)
            if audit_rate and rng.random() < audit_rate:
                stats.audited += 1
                if evaluate_full(expr, s) != ok:
                    stats.audit_mismatches += 1
            if ok:
                d = _digest(s)
                if d not in found:
                    found[d] = (s.n, d, to_dict(s))
                if mode == "first":
                    return list(found.values()), stats, False
        if exhausted:
            break
    return list(found.values()), stats, exhausted


def search(spec: SearchSpec, workers: int = 1, out_dir=None) -> SearchResult:
    """Run a search; raises :class:`BudgetExhausted` (with the partial
    result attached) when the node or time budget runs out first."""
    started = time.monotonic()
    deadline = started + spec.seconds
    jobs = [(o, pi, spec.where, spec.mode, spec.budget, deadline, spec.audit_rate)
            for o in spec.ops() for pi in range(len(_partitions(_op(o).size)))]
    result = SearchResult(spec)
    seen: dict[str, Witness] = {}
    exhausted = False

    def absorb(res):
        nonlocal exhausted
        wits, stats, ex = res
        result.stats.add(stats)
        exhausted = exhausted or ex
        for n, d, doc in wits:
            seen.setdefault(d, Witness(n, d, doc))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_search_shard, j) for j in jobs]
            for fut in futures:
                absorb(fut.result())
                # an earlier shard that ran out of budget leaves "first" undecided
                if spec.mode == "first" and (seen or exhausted):
                    for f in futures:
                        f.cancel()
                    break
    else:
        for j in jobs:
            if spec.mode != "first":
                # shared node budget across shards when running in one process
                j = j[:4] + (spec.budget - result.stats.nodes,) + j[5:]
            absorb(_search_shard(j))
            if spec.mode == "first" and seen:
                break
            if result.stats.nodes >= spec.budget:
                exhausted = True
                break

    if spec.mode == "first":
        # the first shard that produced anything, first witness in visit order
        result.witnesses = list(seen.values())[:1]
    else:
        result.witnesses = sorted(seen.values(), key=lambda w: (w.n, w.digest))
    result.count = len(result.witnesses) if spec.mode != "first" else int(bool(seen))
    result.stats.seconds = time.monotonic() - started
    if result.stats.nodes >= spec.budget:
        exhausted = True
    if exhausted and not (spec.mode == "first" and result.found):
        raise BudgetExhausted("search budget exhausted", partial=result)
    if out_dir is not None:
        write_witnesses(result, out_dir)
    return result


def write_witnesses(result: SearchResult, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for w in result.witnesses:
        p = out / f"witness-n{w.n}-{w.digest}.json"
        p.write_text(dumps(w.structure()))
        paths.append(p)
    return paths


__all__ = ["SearchSpec", "SearchResult", "SearchStats", "Witness", "search", "parse_range",
           "expand_ops", "write_witnesses"]
