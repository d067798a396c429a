"""Approximation spaces, rough sets and the rough group axioms.

Subsets of a universe are Python ints used as bit-sets: element ``i`` is a
member of ``X`` iff ``X >> i & 1``.  :func:`bits` and :func:`members` convert
to and from ordinary iterables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

from .errors import EmptySubset, NotSymmetric, ParentNotRoughGroup, RoughTopError


def bits(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subsets_of(mask: int):
    """All sub-masks of ``mask``, empty set first, in increasing order."""
    elems = members(mask)
    for k in range(1 << len(elems)):
        sub = 0
        for j, e in enumerate(elems):
            if k >> j & 1:
                sub |= 1 << e
        yield sub


@dataclass(frozen=True)
class Verdict:
    """A boolean result with the data explaining a failure.

    ``code`` names the violated condition, ``witness`` holds the concrete
    points or sets. ``applicable`` is False when a hypothesis of the check
    does not hold; such verdicts are also falsy.
    """

    ok: bool
    witness: Any = None
    reason: str = ""
    code: Any = None
    applicable: bool = True

    def __bool__(self) -> bool:
        return self.ok and self.applicable

    @classmethod
    def yes(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def no(cls, witness=None, reason="", code=None) -> "Verdict":
        return cls(False, witness, reason, code)

    @classmethod
    def not_applicable(cls, reason: str) -> "Verdict":
        return cls(False, None, reason, None, applicable=False)

    def symbol(self) -> str:
        if not self.applicable:
            return "n/a"
        return "✓" if self.ok else "✗"


@dataclass(frozen=True)
class Universe:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise RoughTopError("universe must be non-empty")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise RoughTopError("one label per element required")
            if len(set(self.labels)) != self.size:
                raise RoughTopError("labels must be distinct")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def index(self, label) -> int:
        label = str(label)
        if self.labels is None:
            i = int(label)
            if not 0 <= i < self.size:
                raise KeyError(label)
            return i
        return self.labels.index(label)

    def from_labels(self, labels: Iterable) -> int:
        return bits(self.index(x) for x in labels)

    def to_labels(self, mask: int) -> list[str]:
        return [self.label(i) for i in members(mask)]


class Partition:
    """Equivalence classes of a universe, stored as bit-set blocks."""

    __slots__ = ("size", "blocks", "block_of")

    def __init__(self, size: int, blocks: Iterable[int | Iterable[int]]):
        norm = []
        for b in blocks:
            norm.append(b if isinstance(b, int) else bits(b))
        seen = 0
        for b in norm:
            if b == 0:
                raise RoughTopError("empty block")
            if b & seen:
                raise RoughTopError("blocks overlap", witness=members(b & seen))
            seen |= b
        if seen != (1 << size) - 1:
            raise RoughTopError("blocks do not cover the universe",
                                witness=members(((1 << size) - 1) & ~seen))
        # order blocks by least element so equal partitions compare equal
        norm.sort(key=lambda b: (b & -b))
        self.size = size
        self.blocks = tuple(norm)
        block_of = [0] * size
        for b in self.blocks:
            for i in members(b):
                block_of[i] = b
        self.block_of = tuple(block_of)

    @classmethod
    def discrete(cls, size: int) -> "Partition":
        return cls(size, [1 << i for i in range(size)])

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "Partition":
        blocks: dict[int, int] = {}
        for i, b in enumerate(rgs):
            blocks[b] = blocks.get(b, 0) | (1 << i)
        return cls(len(rgs), blocks.values())

    def as_lists(self) -> list[list[int]]:
        return [list(members(b)) for b in self.blocks]

    def __eq__(self, other):
        return isinstance(other, Partition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"Partition({self.as_lists()})"


@dataclass(frozen=True)
class ApproximationSpace:
    universe: Universe
    partition: Partition

    def __post_init__(self):
        if self.partition.size != self.universe.size:
            raise RoughTopError("partition size differs from universe size")

    @property
    def size(self) -> int:
        return self.universe.size

    def upper(self, X: int) -> int:
        out = 0
        for b in self.partition.blocks:
            if b & X:
                out |= b
        return out

    def lower(self, X: int) -> int:
        out = 0
        for b in self.partition.blocks:
            if b & X == b:
                out |= b
        return out


def upper_approx(space: ApproximationSpace, X: int) -> int:
    """Union of the blocks meeting ``X``."""
    return space.upper(X)


def lower_approx(space: ApproximationSpace, X: int) -> int:
    """Union of the blocks contained in ``X``."""
    return space.lower(X)


class OpTable:
    """A total binary operation on ``0..n-1`` given as a Cayley table.

    ``kind`` and ``param`` record how the table was built so it can be written
    back to a structure file in the same form.
    """

    __slots__ = ("table", "size", "kind", "param", "_key")

    def __init__(self, table: Sequence[Sequence[int]], kind: str = "table", param=None):
        rows = tuple(tuple(int(v) for v in row) for row in table)
        n = len(rows)
        if n == 0:
            raise RoughTopError("empty operation table")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise RoughTopError(f"row {i} has {len(row)} entries, expected {n}")
            for j, v in enumerate(row):
                if not 0 <= v < n:
                    raise RoughTopError(f"entry ({i},{j})={v} is not an element", witness=(i, j))
        self.table = rows
        self.size = n
        self.kind = kind
        self.param = param
        self._key = None

    @classmethod
    def zn_add(cls, k: int) -> "OpTable":
        return cls([[(a + b) % k for b in range(k)] for a in range(k)], "zn_add", k)

    @classmethod
    def mod_mul(cls, p: int) -> "OpTable":
        """Multiplication mod ``p`` on ``{1..p-1}``; index ``i`` stands for ``i+1``."""
        n = p - 1
        if n < 1:
            raise RoughTopError("mod_mul needs p >= 2")
        return cls([[((a + 1) * (b + 1)) % p - 1 for b in range(n)] for a in range(n)],
                   "mod_mul", p)

    def labels(self) -> tuple[str, ...] | None:
        if self.kind == "mod_mul":
            return tuple(str(i + 1) for i in range(self.size))
        return None

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = self.table
        return self._key

    def __eq__(self, other):
        return isinstance(other, OpTable) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        if self.kind != "table":
            return f"OpTable.{self.kind}({self.param})"
        return f"OpTable({[list(r) for r in self.table]})"

    def __call__(self, x: int, y: int) -> int:
        return self.table[x][y]

    def prod(self, A: int, B: int) -> int:
        """The set product ``AB``."""
        t = self.table
        out = 0
        bs = members(B)
        for a in members(A):
            row = t[a]
            for b in bs:
                out |= 1 << row[b]
        return out

    def left(self, g: int, A: int) -> int:
        row = self.table[g]
        out = 0
        for a in members(A):
            out |= 1 << row[a]
        return out

    def right(self, A: int, g: int) -> int:
        t = self.table
        out = 0
        for a in members(A):
            out |= 1 << t[a][g]
        return out

    def is_group(self) -> bool:
        n, t = self.size, self.table
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if t[t[x][y]][z] != t[x][t[y][z]]:
                        return False
        ids = [e for e in range(n) if all(t[e][x] == x == t[x][e] for x in range(n))]
        if not ids:
            return False
        e = ids[0]
        return all(any(t[x][y] == e == t[y][x] for y in range(n)) for x in range(n))

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[x][y] == t[y][x] for x in range(self.size) for y in range(x))


@dataclass(frozen=True)
class RoughGroupCertificate:
    identity: int
    inverse: dict
    upper: int
    lower: int
    unique_inverses: bool
    identity_candidates: tuple[int, ...] = field(default=())

    @property
    def unique_identity(self) -> bool:
        return len(self.identity_candidates) <= 1

    def inv(self, x: int) -> int:
        return self.inverse[x]

    def inv_set(self, A: int) -> int:
        out = 0
        for a in members(A):
            out |= 1 << self.inverse[a]
        return out


def check_rough_group(space: ApproximationSpace, op: OpTable, G: int
                      ) -> tuple[Verdict, RoughGroupCertificate | None]:
    """Check the four rough group axioms for ``G`` in ``(space, op)``.

    A failing verdict's ``code`` is the violated axiom (1..4).
    """
    if G == 0:
        raise EmptySubset("G must be non-empty")
    if op.size != space.size:
        raise RoughTopError("operation table and universe differ in size")
    t = op.table
    up = space.upper(G)
    gs = members(G)
    us = members(up)
    for x in gs:
        row = t[x]
        for y in gs:
            if not up >> row[y] & 1:
                return Verdict.no((x, y), "product leaves the upper approximation", 1), None
    for x in us:
        for y in us:
            xy = t[x][y]
            for z in us:
                if t[xy][z] != t[x][t[y][z]]:
                    return Verdict.no((x, y, z), "not associative on the upper approximation", 2), None
    ids = tuple(e for e in us if all(t[e][x] == x and t[x][e] == x for x in us))
    if not ids:
        return Verdict.no(None, "no identity in the upper approximation", 3), None
    e = ids[0]
    inverse = {}
    unique = True
    for x in gs:
        cands = [y for y in gs if t[x][y] == e and t[y][x] == e]
        if not cands:
            return Verdict.no((x,), "no inverse inside G", 4), None
        if len(cands) > 1:
            unique = False
        inverse[x] = cands[0]
    cert = RoughGroupCertificate(e, inverse, up, space.lower(G), unique, ids)
    reason = "" if len(ids) == 1 else "identity not unique; least index chosen"
    return Verdict(True, None, reason), cert


class RoughGroup:
    """The algebraic part of a rough structure: ``(space, op, G)``.

    Nothing is assumed about ``G``; :attr:`is_rough_group` reports the
    verdict and :attr:`cert` raises if the axioms fail.
    """

    def __init__(self, space: ApproximationSpace, op: OpTable, G: int):
        if G == 0:
            raise EmptySubset("G must be non-empty")
        self.space = space
        self.op = op
        self.G = G
        self._cache: dict = {}

    @cached_property
    def upper(self) -> int:
        return self.space.upper(self.G)

    @cached_property
    def lower(self) -> int:
        return self.space.lower(self.G)

    @cached_property
    def _checked(self):
        return check_rough_group(self.space, self.op, self.G)

    @property
    def rough_group_verdict(self) -> Verdict:
        return self._checked[0]

    @property
    def is_rough_group(self) -> bool:
        return self._checked[0].ok

    @property
    def cert(self) -> RoughGroupCertificate:
        cert = self._checked[1]
        if cert is None:
            raise ParentNotRoughGroup("G is not a rough group", witness=self._checked[0])
        return cert

    @property
    def e(self) -> int | None:
        cert = self._checked[1]
        return cert.identity if cert else None

    @cached_property
    def e_in_g(self) -> bool:
        e = self.e
        return e is not None and bool(self.G >> e & 1)

    @cached_property
    def closed_under_op(self) -> bool:
        """``G*G`` is inside ``G``."""
        return self.op.prod(self.G, self.G) & ~self.G == 0

    @cached_property
    def is_group(self) -> bool:
        """A rough group with ``G*G`` inside ``G``: an honest group on ``G``."""
        return self.is_rough_group and self.closed_under_op

    def cached(self, key, fn):
        """Memoise topology-independent results on this object."""
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = fn()
            return val

    def __repr__(self):
        return (f"RoughGroup(op={self.op!r}, blocks={self.space.partition.as_lists()}, "
                f"G={list(members(self.G))})")


def _require_parent(parent) -> RoughGroupCertificate:
    if not parent.is_rough_group:
        raise ParentNotRoughGroup("parent G is not a rough group")
    return parent.cert


def _require_inside(parent, H: int):
    if H & ~parent.G:
        raise RoughTopError("H must be a subset of G", witness=members(H & ~parent.G))


def rough_subgroup_criterion(parent, H: int) -> Verdict:
    """Closure into the upper approximation of ``H`` plus inverses in ``H``."""
    cert = _require_parent(parent)
    _require_inside(parent, H)
    if H == 0:
        return Verdict.no(None, "H is empty", 0)
    t = parent.op.table
    up = parent.space.upper(H)
    hs = members(H)
    for x in hs:
        for y in hs:
            if not up >> t[x][y] & 1:
                return Verdict.no((x, y), "product leaves upper(H)", 1)
    for y in hs:
        if not H >> cert.inverse[y] & 1:
            return Verdict.no((y,), "inverse outside H", 2)
    return Verdict.yes()


def check_rough_subgroup(parent, H: int) -> Verdict:
    """Subgroup test via the two-condition criterion, cross-checked against
    running the full axiom check on ``H``."""
    crit = rough_subgroup_criterion(parent, H)
    if H:
        direct, _ = check_rough_group(parent.space, parent.op, H)
        if direct.ok != crit.ok:
            raise AssertionError(
                f"subgroup criterion ({crit.ok}) disagrees with the axioms ({direct.ok}) for H={members(H)}")
    return crit


@dataclass(frozen=True)
class NormalityFlags:
    symmetric: Verdict
    normal: Verdict
    weakly_rough_normal: Verdict


def normality_flags(parent, H: int) -> NormalityFlags:
    cert = _require_parent(parent)
    _require_inside(parent, H)
    op, G = parent.op, parent.G
    Hinv = cert.inv_set(H)
    if Hinv == H:
        sym = Verdict.yes()
    else:
        sym = Verdict.no(members(H ^ Hinv), "H differs from its inverse set")
    normal = Verdict.yes()
    weak = Verdict.yes()
    for g in members(G):
        if normal and op.left(g, H) != op.right(H, g):
            normal = Verdict.no((g,), "gH != Hg")
        conj = op.right(op.left(g, H), cert.inverse[g])
        if weak and (conj & G) & ~H:
            weak = Verdict.no((g,), "(gHg^-1) n G not inside H")
    return NormalityFlags(sym, normal, weak)


@dataclass(frozen=True)
class OrderReport:
    order: int | None
    powers: tuple[int, ...]

    @property
    def exceeds_cap(self) -> bool:
        return self.order is None


def subset_order(parent, H: int, cap: int = 8) -> OrderReport:
    """Least ``m >= 2`` with ``H^m == H``; ``order`` is None past ``cap``.

    ``powers`` lists ``H^2, H^3, ...`` as computed (stops early once the
    sequence cycles).
    """
    cert = _require_parent(parent)
    _require_inside(parent, H)
    if H == 0:
        raise EmptySubset("H must be non-empty")
    if cert.inv_set(H) != H:
        raise NotSymmetric("H is not symmetric", witness=members(H))
    op = parent.op
    powers = []
    seen = {H}
    P = H
    for m in range(2, cap + 1):
        P = op.prod(P, H)
        powers.append(P)
        if P == H:
            return OrderReport(m, tuple(powers))
        if P in seen:
            break
        seen.add(P)
    return OrderReport(None, tuple(powers))


@dataclass(frozen=True)
class CosetReport:
    cosets: tuple[tuple[int, int], ...]
    disjoint_or_equal: Verdict


def coset_report(parent, H: int) -> CosetReport:
    """Left cosets ``gH`` for ``g`` in the upper approximation of ``G``."""
    _require_inside(parent, H)
    op = parent.op
    up = parent.space.upper(parent.G)
    cosets = tuple((g, op.left(g, H)) for g in members(up))
    verdict = Verdict.yes()
    for i, (g, A) in enumerate(cosets):
        for h, B in cosets[i + 1:]:
            if A != B and A & B:
                verdict = Verdict.no((g, h), "cosets overlap without being equal")
                break
        if not verdict:
            break
    return CosetReport(cosets, verdict)
