"""Finite topologies in minimal-open (Alexandrov) form.

Every finite topology is determined by the smallest open set ``m(x)``
containing each point; the open sets are exactly the unions of these.
:class:`Topology` works on integer points with bit-set subsets.  Products
of topologies (:class:`ProductSpace`) use tuple points, and the map
checks below accept either kind through the small ``points`` / ``nbhd`` /
``in_nbhd`` interface.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .core import Verdict, bits, members
from .errors import (CapExceeded, CarrierMismatch, MissingEmptyOrCarrier,
                     NotClosedUnderIntersection, NotClosedUnderUnion, TopologyError)

OPEN_FAMILY_CAP = 10
HOMOGENEITY_CAP = 7


class Topology:
    __slots__ = ("carrier", "mo", "_pts")

    def __init__(self, carrier: int, mo: Mapping[int, int], *, check: bool = True):
        self.carrier = carrier
        self.mo = dict(mo)
        self._pts = None
        if check:
            self._validate()

    def _validate(self):
        pts = members(self.carrier)
        if set(self.mo) != set(pts):
            raise TopologyError("minimal opens must be given for exactly the carrier points")
        for x in pts:
            m = self.mo[x]
            if not m >> x & 1:
                raise TopologyError(f"point {x} is not in its minimal open", witness=(x,))
            if m & ~self.carrier:
                raise TopologyError(f"m({x}) leaves the carrier", witness=(x,))
            for y in members(m):
                if self.mo[y] & ~m:
                    raise TopologyError(f"{y} in m({x}) but m({y}) not inside m({x})", witness=(x, y))

    @classmethod
    def discrete(cls, carrier: int) -> "Topology":
        return cls(carrier, {x: 1 << x for x in members(carrier)}, check=False)

    @classmethod
    def indiscrete(cls, carrier: int) -> "Topology":
        return cls(carrier, {x: carrier for x in members(carrier)}, check=False)

    def points(self) -> tuple[int, ...]:
        if self._pts is None:
            self._pts = members(self.carrier)
        return self._pts

    def m(self, x: int) -> int:
        return self.mo[x]

    def nbhd(self, x) -> frozenset:
        return frozenset(members(self.mo[x]))

    def in_nbhd(self, x, y) -> bool:
        return bool(self.mo[x] >> y & 1)

    def is_open(self, S: int) -> bool:
        if S & ~self.carrier:
            return False
        for x in members(S):
            if self.mo[x] & ~S:
                return False
        return True

    def is_closed(self, S: int) -> bool:
        return self.is_open(self.carrier & ~S)

    def is_clopen(self, S: int) -> bool:
        return self.is_open(S) and self.is_closed(S)

    def closure(self, A: int) -> int:
        out = 0
        for x in self.points():
            if self.mo[x] & A:
                out |= 1 << x
        return out

    def interior(self, A: int) -> int:
        out = 0
        for x in self.points():
            if self.mo[x] & ~A == 0:
                out |= 1 << x
        return out

    def open_hull(self, A: int) -> int:
        """Smallest open set containing ``A``."""
        out = 0
        for x in members(A):
            out |= self.mo[x]
        return out

    def opens(self) -> Iterator[int]:
        """Every open set once, ascending by mask value."""
        if self.carrier.bit_count() > OPEN_FAMILY_CAP:
            raise CapExceeded(f"open-set enumeration is capped at {OPEN_FAMILY_CAP} points")
        fam = {0}
        for x in self.points():
            m = self.mo[x]
            fam |= {U | m for U in fam}
        yield from sorted(fam)

    def is_discrete(self) -> bool:
        return all(self.mo[x] == 1 << x for x in self.points())

    @property
    def key(self) -> tuple:
        return (self.carrier,) + tuple(self.mo[x] for x in self.points())

    def __eq__(self, other):
        return isinstance(other, Topology) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        body = ", ".join(f"{x}: {list(members(m))}" for x, m in sorted(self.mo.items()))
        return f"Topology({{{body}}})"


def topology_from_open_sets(carrier: int, opens: Iterable[int]) -> Topology:
    """Validate an explicit open-set family and convert it to minimal opens."""
    fam = set(opens)
    for U in fam:
        if U & ~carrier:
            raise TopologyError("open set leaves the carrier", witness=members(U))
    if 0 not in fam or carrier not in fam:
        raise MissingEmptyOrCarrier("the empty set and the carrier must be open")
    ordered = sorted(fam)
    for i, U in enumerate(ordered):
        for V in ordered[i + 1:]:
            if U | V not in fam:
                raise NotClosedUnderUnion("union of two opens is not open",
                                          witness=(members(U), members(V)))
            if U & V not in fam:
                raise NotClosedUnderIntersection("intersection of two opens is not open",
                                                 witness=(members(U), members(V), members(U & V)))
    mo = {}
    for x in members(carrier):
        m = carrier
        for U in ordered:
            if U >> x & 1:
                m &= U
        mo[x] = m
    top = Topology(carrier, mo)
    if set(top.opens()) != fam:  # pragma: no cover - guaranteed by the checks above
        raise TopologyError("open family does not round-trip")
    return top


def topology_from_base(carrier: int, base: Iterable[int]) -> Topology:
    """Topology generated by ``base`` (a subbase is accepted too)."""
    sets = list(base)
    mo = {}
    for x in members(carrier):
        m = carrier
        for B in sets:
            if B >> x & 1:
                m &= B
        mo[x] = m
    return Topology(carrier, mo)


def closure_interior(top: Topology, A: int) -> tuple[int, int]:
    return top.closure(A), top.interior(A)


def subspace(top: Topology, A: int) -> Topology:
    if A & ~top.carrier:
        raise CarrierMismatch("subspace must lie inside the carrier", witness=members(A & ~top.carrier))
    return Topology(A, {x: top.mo[x] & A for x in members(A)}, check=False)


class SeparationFlags:
    """T0..T3 plus T3half, each computed on first access.

    On a finite space T3half coincides with T3 (a finite T1 space is
    discrete), so it is reported as a copy of T3.
    """

    def __init__(self, top: "Topology"):
        self.top = top

    @cached_property
    def T0(self) -> Verdict:
        return is_t0(self.top)

    @cached_property
    def T1(self) -> Verdict:
        return is_t1(self.top)

    @cached_property
    def T2(self) -> Verdict:
        return is_t2(self.top)

    @cached_property
    def T3(self) -> Verdict:
        if not self.T1:
            return Verdict.no(self.T1.witness, "not T1")
        reg = is_regular(self.top)
        return reg if not reg else Verdict.yes()

    @property
    def T3half(self) -> Verdict:
        return self.T3

    def as_dict(self) -> dict[str, Verdict]:
        return {"T0": self.T0, "T1": self.T1, "T2": self.T2, "T3": self.T3, "T3half": self.T3half}


def is_t0(top: Topology) -> Verdict:
    seen = {}
    for x in top.points():
        m = top.mo[x]
        if m in seen:
            return Verdict.no((seen[m], x), "points share a minimal open")
        seen[m] = x
    return Verdict.yes()


def is_t1(top: Topology) -> Verdict:
    for x in top.points():
        m = top.mo[x]
        if m != 1 << x:
            y = members(m & ~(1 << x))[0]
            return Verdict.no((x, y), f"every open around {x} contains {y}")
    return Verdict.yes()


def is_t2(top: Topology) -> Verdict:
    pts = top.points()
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            if top.mo[x] & top.mo[y]:
                return Verdict.no((x, y), "minimal opens meet")
    return Verdict.yes()


def is_regular(top: Topology) -> Verdict:
    """Closed sets of the form cl{y} separated from outside points."""
    for y in top.points():
        F = top.closure(1 << y)
        hull = top.open_hull(F)
        for x in top.points():
            if not F >> x & 1 and top.mo[x] & hull:
                return Verdict.no((x, y), f"{x} cannot be separated from cl{{{y}}}")
    return Verdict.yes()


def is_regular_oracle(top: Topology) -> bool:
    """Regularity straight from the definition, over every closed set."""
    for U in top.opens():
        F = top.carrier & ~U
        for x in members(U):
            if not any(not (V & W) for V in top.opens() if V >> x & 1
                       for W in top.opens() if F & ~W == 0):
                return False
    return True


def separation_flags(top: Topology) -> SeparationFlags:
    return SeparationFlags(top)


def is_extremally_disconnected(top: Topology, oracle: bool = False) -> Verdict:
    """Closures of open sets are open.  The default checks the minimal opens
    only, which suffices because closure distributes over finite unions."""
    candidates = top.opens() if oracle else (top.mo[x] for x in top.points())
    for U in candidates:
        c = top.closure(U)
        if not top.is_open(c):
            return Verdict.no(members(U), "closure of this open set is not open")
    return Verdict.yes()


def components(top: Topology) -> tuple[int, ...]:
    """Connected components, ordered by least point."""
    remaining = top.carrier
    comps = []
    pts = top.points()
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            new = 0
            for x in members(frontier):
                new |= top.mo[x]
                for y in pts:
                    if top.mo[y] >> x & 1:
                        new |= 1 << y
            frontier = new & ~comp
            comp |= new
        comps.append(comp)
        remaining &= ~comp
    return tuple(comps)


def is_connected_subset(top: Topology, S: int) -> bool:
    """Brute-force connectedness of the subspace ``S`` from the definition."""
    if S == 0:
        return True
    sub = subspace(top, S)
    for U in sub.opens():
        if U and U != S and sub.is_open(S & ~U):
            return False
    return True


def components_oracle(top: Topology) -> tuple[int, ...]:
    """Components as unions of all connected subsets through each point."""
    from .core import subsets_of
    conn = [S for S in subsets_of(top.carrier) if S and is_connected_subset(top, S)]
    comps = set()
    for x in top.points():
        c = 0
        for S in conn:
            if S >> x & 1:
                c |= S
        comps.add(c)
    return tuple(sorted(comps, key=lambda c: c & -c))


class ProductSpace:
    """Product of topologies, optionally restricted to a subset of tuples."""

    def __init__(self, factors, domain: Iterable[tuple] | None = None):
        self.factors = tuple(factors)
        full = itertools.product(*(f.points() for f in self.factors))
        if domain is None:
            self._points = tuple(full)
            self._domain = None
        else:
            dom = set(domain)
            self._points = tuple(p for p in full if p in dom)
            self._domain = frozenset(self._points)

    def points(self) -> tuple:
        return self._points

    def _member(self, p) -> bool:
        return self._domain is None or p in self._domain

    def nbhd(self, p) -> frozenset:
        opts = [f.nbhd(c) for f, c in zip(self.factors, p)]
        return frozenset(q for q in itertools.product(*(sorted(o) for o in opts)) if self._member(q))

    def in_nbhd(self, p, q) -> bool:
        return self._member(q) and all(f.in_nbhd(a, b) for f, a, b in zip(self.factors, p, q))


def open_family(space) -> set[frozenset]:
    """All open sets of any finite space exposing ``points``/``nbhd``."""
    pts = space.points()
    if len(pts) > 4 * OPEN_FAMILY_CAP:
        raise CapExceeded("open family too large to enumerate")
    fam = {frozenset()}
    for p in pts:
        m = space.nbhd(p)
        fam |= {U | m for U in fam}
    return fam


def _is_open_generic(space, S: frozenset) -> bool:
    return all(space.nbhd(p) <= S for p in S)


class MapTable:
    """A finite map between spaces; ``values`` must be total on the domain."""

    def __init__(self, domain, codomain, values: Mapping):
        self.domain = domain
        self.codomain = codomain
        self.values = dict(values)
        dom_pts = set(domain.points())
        if set(self.values) != dom_pts:
            raise CarrierMismatch("map must be defined on exactly the domain points")
        cod_pts = set(codomain.points())
        for p, v in self.values.items():
            if v not in cod_pts:
                raise CarrierMismatch(f"value of {p} is outside the codomain", witness=(p, v))

    def __call__(self, p):
        return self.values[p]

    def image(self, S) -> frozenset:
        return frozenset(self.values[p] for p in S)


def continuity_failures(f: MapTable) -> list[tuple]:
    """Every ``(p, q)`` with ``q`` in ``m(p)`` but ``f(q)`` outside ``m(f(p))``."""
    out = []
    for p in f.domain.points():
        fp = f.values[p]
        for q in sorted(f.domain.nbhd(p)):
            if not f.codomain.in_nbhd(fp, f.values[q]):
                out.append((p, q))
    return out


def is_continuous(f: MapTable, oracle: bool = False) -> Verdict:
    """Minimal-open criterion: ``f(m(p))`` inside ``m(f(p))`` for every ``p``.

    With ``oracle=True`` checks that every open preimage is open instead.
    """
    if oracle:
        for V in open_family(f.codomain):
            pre = frozenset(p for p in f.domain.points() if f.values[p] in V)
            if not _is_open_generic(f.domain, pre):
                return Verdict.no(tuple(sorted(V)), "preimage of this open set is not open")
        return Verdict.yes()
    for p in f.domain.points():
        fp = f.values[p]
        for q in sorted(f.domain.nbhd(p)):
            if not f.codomain.in_nbhd(fp, f.values[q]):
                return Verdict.no((p, q, f.values[q]),
                                  f"{q} is near {p} but its image escapes m({fp})")
    return Verdict.yes()


def is_open_map(f: MapTable, oracle: bool = False) -> Verdict:
    """Images of open sets are open.  Images of minimal opens suffice since
    images commute with unions; ``oracle=True`` walks the whole family."""
    if oracle:
        sets = open_family(f.domain)
    else:
        sets = [f.domain.nbhd(p) for p in f.domain.points()]
    for U in sets:
        img = f.image(U)
        if not _is_open_generic(f.codomain, img):
            return Verdict.no(tuple(sorted(U)), "image of this open set is not open")
    return Verdict.yes()


def is_homeomorphism(f: MapTable) -> Verdict:
    vals = list(f.values.values())
    if len(set(vals)) != len(vals):
        return Verdict.no(None, "not injective")
    if len(vals) != len(f.codomain.points()):
        return Verdict.no(None, "not surjective")
    cont = is_continuous(f)
    if not cont:
        return cont
    return is_open_map(f)


@dataclass(frozen=True)
class FixedPoints:
    points: frozenset
    clopen: Verdict | None


def fixed_point_set(f: MapTable) -> FixedPoints:
    """Fixed points of a self-map; ``clopen`` is filled in when the space is
    extremally disconnected and Hausdorff."""
    if set(f.domain.points()) != set(f.codomain.points()):
        raise CarrierMismatch("fixed points need a self-map")
    fix = frozenset(p for p, v in f.values.items() if p == v)
    clopen = None
    dom = f.domain
    if isinstance(dom, Topology) and is_t2(dom) and is_extremally_disconnected(dom):
        mask = bits(fix)
        if dom.is_clopen(mask):
            clopen = Verdict.yes()
        else:
            clopen = Verdict.no(tuple(sorted(fix)), "fixed-point set is not clopen")
    return FixedPoints(fix, clopen)


def self_homeomorphisms(top: Topology) -> Iterator[dict[int, int]]:
    """Every self-homeomorphism as a point map, by backtracking with
    neighbourhood-size pruning."""
    pts = top.points()
    up_size = {x: top.mo[x].bit_count() for x in pts}
    down_size = {x: sum(1 for y in pts if top.mo[y] >> x & 1) for x in pts}
    sig = {x: (up_size[x], down_size[x]) for x in pts}
    assign: dict[int, int] = {}
    used = 0

    def consistent(x, fx):
        for y, fy in assign.items():
            if top.in_nbhd(x, y) != top.in_nbhd(fx, fy):
                return False
            if top.in_nbhd(y, x) != top.in_nbhd(fy, fx):
                return False
        return top.in_nbhd(x, x) == top.in_nbhd(fx, fx)

    def rec(i):
        nonlocal used
        if i == len(pts):
            yield dict(assign)
            return
        x = pts[i]
        for fx in pts:
            if used >> fx & 1 or sig[fx] != sig[x] or not consistent(x, fx):
                continue
            assign[x] = fx
            used |= 1 << fx
            yield from rec(i + 1)
            del assign[x]
            used &= ~(1 << fx)

    yield from rec(0)


def is_homogeneous(top: Topology, cap: int = HOMOGENEITY_CAP) -> Verdict:
    pts = top.points()
    if len(pts) > cap:
        raise CapExceeded(f"homogeneity check is capped at {cap} points")
    if not pts:
        return Verdict.yes()
    x0 = pts[0]
    # quick obstruction: all minimal opens must have equal size
    sizes = {top.mo[x].bit_count() for x in pts}
    if len(sizes) > 1:
        a = min(pts, key=lambda x: top.mo[x].bit_count())
        b = max(pts, key=lambda x: top.mo[x].bit_count())
        return Verdict.no((a, b), "minimal opens differ in size")
    orbit = 0
    for h in self_homeomorphisms(top):
        orbit |= 1 << h[x0]
        if orbit == top.carrier:
            return Verdict.yes()
    missing = members(top.carrier & ~orbit)[0]
    return Verdict.no((x0, missing), f"no homeomorphism sends {x0} to {missing}")
