"""Exhaustive generators and canonical forms."""

from __future__ import annotations

import hashlib
from functools import lru_cache
from typing import Iterator

from .core import OpTable, Partition, members
from .errors import CapExceeded
from .fintop import Topology

PARTITION_CAP = 10
TOPOLOGY_CAP = 7
CANONICAL_CAP = 8


def enum_rgs(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i, mx):
        if i == n:
            yield tuple(rgs)
            return
        for v in range(mx + 2):
            rgs[i] = v
            yield from rec(i + 1, max(mx, v))

    rgs[0] = 0
    yield from rec(1, 0)


def enum_partitions(n: int) -> Iterator[Partition]:
    if not 1 <= n <= PARTITION_CAP:
        raise CapExceeded(f"partitions are enumerated for 1 <= n <= {PARTITION_CAP}")
    for rgs in enum_rgs(n):
        yield Partition.from_rgs(rgs)


def _extend(mo: tuple[int, ...], j: int) -> Iterator[tuple[int, ...]]:
    """Add point ``j`` to a preorder on ``0..j-1`` given by minimal opens.

    ``U`` = old points above ``j`` (an open set), ``D`` = old points below
    ``j`` (a closed set); transitivity needs ``U`` inside ``m(d)`` for each
    ``d`` in ``D``.  Every preorder on ``j+1`` points arises exactly once.
    """
    full = (1 << j) - 1
    opens = {0}
    for m in mo:
        opens |= {U | m for U in opens}
    opens = sorted(opens)
    for U in opens:
        allowed = 0
        for d in range(j):
            if U & ~mo[d] == 0:
                allowed |= 1 << d
        for W in opens:
            D = full & ~W
            if D & ~allowed:
                continue
            new = list(mo)
            for d in members(D):
                new[d] |= 1 << j
            new.append(U | (1 << j))
            yield tuple(new)


def enum_preorders(n: int) -> Iterator[tuple[int, ...]]:
    """Minimal-open tuples ``(m(0), ..., m(n-1))`` of every topology on
    ``n`` labelled points."""
    if n == 0:
        yield ()
        return

    def rec(mo, j):
        if j == n:
            yield mo
            return
        for nxt in _extend(mo, j):
            yield from rec(nxt, j + 1)

    yield from rec((1,), 1)


@lru_cache(maxsize=None)
def preorders_cached(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(enum_preorders(n))


def topologies_on(carrier: int) -> Iterator[Topology]:
    """Every topology on the points of ``carrier``."""
    pts = members(carrier)
    k = len(pts)
    if k > TOPOLOGY_CAP:
        raise CapExceeded(f"topologies are enumerated for at most {TOPOLOGY_CAP} points")
    source = preorders_cached(k) if k <= 6 else enum_preorders(k)
    # position-space masks map to carrier masks through a lookup table
    lut = [0] * (1 << k)
    for mask in range(1 << k):
        out = 0
        for i in range(k):
            if mask >> i & 1:
                out |= 1 << pts[i]
        lut[mask] = out
    for mo in source:
        yield Topology(carrier, {pts[i]: lut[mo[i]] for i in range(k)}, check=False)


def enum_topologies(n: int) -> Iterator[Topology]:
    if not 1 <= n <= TOPOLOGY_CAP:
        raise CapExceeded(f"topologies are enumerated for 1 <= n <= {TOPOLOGY_CAP}")
    yield from topologies_on((1 << n) - 1)


def topology_families_oracle(n: int) -> int:
    """Count topologies on ``n`` points by brute force over set families."""
    full = (1 << n) - 1
    middle = [S for S in range(1, full)]
    count = 0
    for pick in range(1 << len(middle)):
        fam = {0, full}
        for i, S in enumerate(middle):
            if pick >> i & 1:
                fam.add(S)
        if all((A | B) in fam and (A & B) in fam for A in fam for B in fam):
            count += 1
    return count


def bell(n: int) -> int:
    """Bell numbers by the recurrence ``B(n+1) = sum C(n,k) B(k)``."""
    from math import comb
    B = [1]
    for m in range(n):
        B.append(sum(comb(m, k) * B[k] for k in range(m + 1)))
    return B[n]


@lru_cache(maxsize=None)
def automorphisms(op: OpTable) -> tuple[tuple[int, ...], ...]:
    """All permutations ``p`` with ``p[x*y] == p[x]*p[y]``, identity first."""
    n, t = op.size, op.table
    if n > PARTITION_CAP:
        raise CapExceeded(f"automorphism search is capped at {PARTITION_CAP} elements")
    out = []
    perm = [-1] * n
    used = [False] * n

    def ok_upto(k):
        for x in range(k + 1):
            for y in range(k + 1):
                xy = t[x][y]
                if perm[xy] >= 0 and perm[xy] != t[perm[x]][perm[y]]:
                    return False
        return True

    def rec(k):
        if k == n:
            # every product was checked once its image was assigned
            if all(perm[t[x][y]] == t[perm[x]][perm[y]] for x in range(n) for y in range(n)):
                out.append(tuple(perm))
            return
        for v in range(n):
            if not used[v]:
                perm[k] = v
                used[v] = True
                if ok_upto(k):
                    rec(k + 1)
                used[v] = False
                perm[k] = -1

    rec(0)
    out.sort()
    return tuple(out)


def _apply(p, mask: int) -> int:
    out = 0
    for i in members(mask):
        out |= 1 << p[i]
    return out


def structure_encoding(s, p) -> tuple:
    blocks = tuple(sorted(_apply(p, b) for b in s.space.partition.blocks))
    G = _apply(p, s.G)
    inv = {p[x]: x for x in range(len(p))}
    mo = tuple(_apply(p, s.tau.mo[inv[y]]) for y in sorted(members(_apply(p, s.tau.carrier))))
    return (s.n, blocks, G, mo)


def canonical_encoding(s, cap: int = CANONICAL_CAP) -> tuple:
    if s.n > cap:
        raise CapExceeded(f"canonical forms are computed for n <= {cap}")
    return min(structure_encoding(s, p) for p in automorphisms(s.op))


def canonical_form(s, cap: int = CANONICAL_CAP) -> str:
    """Stable digest of a structure up to relabellings that preserve the
    operation table.  ``cap`` bounds the automorphism search."""
    n, blocks, G, mo = canonical_encoding(s, cap)
    table = ";".join(",".join(map(str, row)) for row in s.op.table)
    text = f"n={n}|op={table}|P={list(blocks)}|G={G}|T={list(mo)}"
    return hashlib.sha256(text.encode()).hexdigest()[:20]


def raw_digest(*parts) -> str:
    return hashlib.sha256(repr(parts).encode()).hexdigest()[:20]


def digest(s) -> str:
    """Report digest: the canonical form, allowed up to the partition cap."""
    return canonical_form(s, cap=PARTITION_CAP)


__all__ = ["enum_partitions", "enum_topologies", "enum_preorders", "topologies_on",
           "topology_families_oracle", "bell", "automorphisms", "canonical_form", "digest"]
