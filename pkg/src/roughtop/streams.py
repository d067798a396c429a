"""Structure streams for sweeps and searches.

Every stream is split into shards named by plain tuples so that worker
processes can rebuild their share of the stream from the name alone.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .core import ApproximationSpace, OpTable, Partition, RoughGroup, Universe, members
from .enumeration import enum_partitions, topologies_on
from .errors import RoughTopError
from .fintop import Topology
from .trg import RoughStructure

PRIMES = (2, 3, 5, 7, 11, 13)
HOM_N_CAP = 4


def parse_op(spec: str) -> OpTable:
    """``zn_add:k``, ``mod_mul:p`` or ``table:PATH`` (JSON list of rows)."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "zn_add":
            return OpTable.zn_add(int(arg))
        if kind == "mod_mul":
            p = int(arg)
            if p not in PRIMES and any(p % q == 0 for q in range(2, p)):
                raise RoughTopError(f"mod_mul needs a prime, got {p}")
            return OpTable.mod_mul(p)
        if kind == "table":
            with open(arg) as fh:
                data = json.load(fh)
            return OpTable(data["table"] if isinstance(data, dict) else data)
    except (ValueError, OSError) as exc:
        raise RoughTopError(f"bad op family {spec!r}: {exc}") from None
    raise RoughTopError(f"unknown op family {spec!r}")


def op_spec(op: OpTable) -> str:
    if op.kind in ("zn_add", "mod_mul"):
        return f"{op.kind}:{op.param}"
    raise RoughTopError("only named op families have a spec string")


def default_ops(n_max: int, n_min: int = 1) -> list[str]:
    """Addition mod n and multiplication mod p for every size in range."""
    out = [f"zn_add:{k}" for k in range(n_min, n_max + 1)]
    out += [f"mod_mul:{p}" for p in PRIMES if n_min <= p - 1 <= n_max]
    return out


@lru_cache(maxsize=None)
def _op(spec: str) -> OpTable:
    return parse_op(spec)


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[Partition, ...]:
    return tuple(enum_partitions(n))


def universe_for(op: OpTable) -> Universe:
    return Universe(op.size, op.labels())


def rough_groups(op_name: str, pi: int) -> Iterator[RoughGroup]:
    """Rough groups ``(space, op, G)`` for one partition, G by increasing mask."""
    op = _op(op_name)
    space = ApproximationSpace(universe_for(op), _partitions(op.size)[pi])
    for G in range(1, 1 << op.size):
        grp = RoughGroup(space, op, G)
        if grp.is_rough_group:
            yield grp


# --- rough structures -------------------------------------------------------

def structure_shards(ops: list[str]) -> list[tuple]:
    return [("structure", o, pi) for o in ops for pi in range(len(_partitions(_op(o).size)))]


def structures_in_shard(shard: tuple) -> Iterator[RoughStructure]:
    _, op_name, pi = shard
    for grp in rough_groups(op_name, pi):
        for tau in topologies_on(grp.upper):
            yield RoughStructure(grp.space, grp.op, grp.G, tau, group=grp)


# --- coset structures -------------------------------------------------------

@dataclass(frozen=True)
class CosetItem:
    """A rough structure over the cosets of ``N`` with ``tau`` traced from
    the group topology whose identity neighbourhood is the subgroup ``K``."""

    structure: RoughStructure
    K: int
    N: int

    @property
    def n(self) -> int:
        return self.structure.n

    def theta(self, carrier: int) -> Topology:
        op = self.structure.op
        return Topology(carrier, {x: op.left(x, self.K) for x in members(carrier)}, check=False)


def subgroups(op: OpTable) -> list[int]:
    n = op.size
    e = next(x for x in range(n) if all(op(x, y) == y for y in range(n)))
    out = []
    for S in range(1, 1 << n):
        if S >> e & 1 and op.prod(S, S) == S:
            out.append(S)
    return out


def coset_partition(op: OpTable, N: int) -> Partition:
    blocks = {op.left(x, N) for x in range(op.size)}
    return Partition(op.size, sorted(blocks))


def coset_shards(ops: list[str]) -> list[tuple]:
    return [("coset", o, 0) for o in ops]


def cosets_in_shard(shard: tuple) -> Iterator[CosetItem]:
    _, op_name, _ = shard
    op = _op(op_name)
    uni = universe_for(op)
    subs = subgroups(op)
    for K in subs:
        for N in subs:
            if K & ~N:
                continue
            space = ApproximationSpace(uni, coset_partition(op, N))
            for G in range(1, 1 << op.size):
                grp = RoughGroup(space, op, G)
                if not grp.is_rough_group:
                    continue
                up = grp.upper
                tau = Topology(up, {x: op.left(x, K) for x in members(up)}, check=False)
                yield CosetItem(RoughStructure(space, op, G, tau, group=grp), K, N)


# --- rough homomorphisms ----------------------------------------------------

def _hom_sides(ops: list[str]) -> list[RoughStructure]:
    sides = []
    for o in ops:
        if _op(o).size > HOM_N_CAP:
            continue
        for pi in range(len(_partitions(_op(o).size))):
            for grp in rough_groups(o, pi):
                sides.append(RoughStructure(grp.space, grp.op, grp.G, Topology.discrete(grp.upper),
                                            group=grp))
    return sides


@lru_cache(maxsize=8)
def hom_sides(ops: tuple[str, ...]) -> tuple[RoughStructure, ...]:
    return tuple(_hom_sides(list(ops)))


def _upper_blocks(s: RoughStructure) -> list[int]:
    return [b for b in s.space.partition.blocks if b & s.upper]


def block_respecting_maps(src: RoughStructure, tgt: RoughStructure) -> Iterator[dict]:
    """Surjections ``upper(G1) -> upper(G2)`` sending blocks onto blocks
    bijectively.  Condition (3) forces this shape, so no rough
    homomorphism is skipped."""
    bs, bt = _upper_blocks(src), _upper_blocks(tgt)
    if len(bs) != len(bt):
        return
    for perm in itertools.permutations(range(len(bt))):
        choices = []
        for b, j in zip(bs, perm):
            pts = members(b)
            choices.append([dict(zip(pts, img)) for img in itertools.product(members(bt[j]), repeat=len(pts))])
        for parts in itertools.product(*choices):
            phi = {}
            for p in parts:
                phi.update(p)
            if len(set(phi.values())) == bin(tgt.upper).count("1"):
                yield phi


def hom_shards(ops: list[str]) -> list[tuple]:
    sides = hom_sides(tuple(ops))
    return [("hom", tuple(ops), i) for i in range(len(sides))]


def homs_in_shard(shard: tuple, verified_only: bool = True) -> Iterator:
    from .hom import RoughHom
    _, ops, i = shard
    sides = hom_sides(tuple(ops))
    src = sides[i]
    for tgt in sides:
        for phi in block_respecting_maps(src, tgt):
            h = RoughHom(src, tgt, phi)
            if not verified_only or h.verdict:
                yield h


@dataclass(frozen=True)
class TopHom:
    """A verified rough homomorphism between two topologised structures."""

    hom: object
    n: int


def _side_topologies(s: RoughStructure, hypothesis) -> list[RoughStructure]:
    out = []
    for tau in topologies_on(s.upper):
        t = RoughStructure(s.space, s.op, s.G, tau, group=s.group)
        if hypothesis(t):
            out.append(t)
    return out


def top_homs_in_shard(shard: tuple, side_hypothesis) -> Iterator[TopHom]:
    """Verified homs paired with every topology pair whose sides satisfy
    ``side_hypothesis``."""
    from .hom import RoughHom
    cache: dict[int, list] = {}
    for h in homs_in_shard(("hom",) + shard[1:]):
        tops = []
        for side in (h.source, h.target):
            key = id(side)
            if key not in cache:
                cache[key] = _side_topologies(side, side_hypothesis)
            tops.append(cache[key])
        for s1 in tops[0]:
            for s2 in tops[1]:
                yield TopHom(RoughHom(s1, s2, h.values), max(s1.n, s2.n))


# --- catalogue and samples --------------------------------------------------

def catalogue_structures() -> list[tuple[str, RoughStructure]]:
    from .catalogue import build_example, executable_entries
    return [(i, build_example(i)) for i in executable_entries()]


def random_topology(rng: random.Random, carrier: int) -> Topology:
    """Transitive closure of a random relation, read as a specialisation preorder."""
    pts = members(carrier)
    mo = {x: 1 << x for x in pts}
    for x in pts:
        for y in pts:
            if x != y and rng.random() < 0.3:
                mo[x] |= 1 << y
    changed = True
    while changed:
        changed = False
        for x in pts:
            acc = mo[x]
            for y in members(mo[x]):
                acc |= mo[y]
            if acc != mo[x]:
                mo[x] = acc
                changed = True
    return Topology(carrier, mo, check=False)


def sampled_structures(seed: int, count: int, n_min: int, n_max: int,
                       tries: int = 50) -> Iterator[RoughStructure]:
    """Random rough structures over addition tables, reproducible by seed."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        n = rng.randint(n_min, n_max)
        op = _op(f"zn_add:{n}")
        parts = _partitions(n)
        for _ in range(tries):
            space = ApproximationSpace(Universe(n), parts[rng.randrange(len(parts))])
            G = rng.randrange(1, 1 << n)
            grp = RoughGroup(space, op, G)
            if grp.is_rough_group:
                tau = random_topology(rng, grp.upper)
                yield RoughStructure(space, op, G, tau, group=grp)
                made += 1
                break
