"""Topological rough groups on finite carriers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .core import (ApproximationSpace, OpTable, RoughGroup, Verdict, members)
from .errors import (CarrierMismatch, ElementNotInG, NotApplicable, NotRoughGroup,
                     NotTopologicalRoughGroup)
from .fintop import (MapTable, ProductSpace, SeparationFlags, Topology, components,
                     is_continuous, is_extremally_disconnected, is_homogeneous,
                     separation_flags, subspace)

# Strongly-TRG domain: triples of G whose product lies in the upper
# approximation.  Reports cite this reading as TRIPLE_DOMAIN_NOTE.
TRIPLE_DOMAIN_NOTE = "triple domain read as {(x,y,z) in G^3 : xyz in upper(G)}"


class RoughStructure:
    """``(space, op, G, tau)`` with ``tau`` a topology on the upper
    approximation of ``G``.

    ``G`` need not satisfy the rough group axioms; checks that require them
    raise :class:`NotRoughGroup`.  All derived data is cached, so a structure
    should be treated as immutable.
    """

    def __init__(self, space: ApproximationSpace, op: OpTable, G: int, tau: Topology,
                 *, group: RoughGroup | None = None):
        self.group = group if group is not None else RoughGroup(space, op, G)
        if tau.carrier != self.group.upper:
            raise CarrierMismatch("topology carrier must be the upper approximation of G",
                                  witness=(members(tau.carrier), members(self.group.upper)))
        self.tau = tau

    space = property(lambda self: self.group.space)
    op = property(lambda self: self.group.op)
    G = property(lambda self: self.group.G)
    upper = property(lambda self: self.group.upper)
    e = property(lambda self: self.group.e)
    e_in_g = property(lambda self: self.group.e_in_g)

    @property
    def n(self) -> int:
        return self.space.size

    @property
    def is_rough_group(self) -> bool:
        return self.group.is_rough_group

    @property
    def cert(self):
        return self.group.cert

    @cached_property
    def tauG(self) -> Topology:
        return subspace(self.tau, self.G)

    def mG(self, x: int) -> int:
        return self.tauG.mo[x]

    @cached_property
    def g_open(self) -> bool:
        return self.tau.is_open(self.G)

    @cached_property
    def e_open_in_upper(self) -> bool:
        e = self.e
        return e is not None and self.tau.mo[e] == 1 << e

    @cached_property
    def e_closed_in_upper(self) -> bool:
        e = self.e
        return e is not None and self.tau.is_closed(1 << e)

    @cached_property
    def sep(self) -> SeparationFlags:
        return separation_flags(self.tauG)

    @cached_property
    def upper_sep(self) -> SeparationFlags:
        return separation_flags(self.tau)

    @cached_property
    def trg(self) -> Verdict:
        if not self.is_rough_group:
            return Verdict.no(None, "not a rough group", "rough_group")
        return check_trg(self)

    @property
    def is_trg(self) -> bool:
        return bool(self.trg)

    @cached_property
    def triple(self) -> Verdict:
        return triple_continuity(self)

    @cached_property
    def strongly(self) -> Verdict:
        if not self.is_trg:
            return Verdict.no(None, "not a topological rough group", "trg")
        return self.triple

    @cached_property
    def is_topological_group(self) -> bool:
        return self.group.is_group and self.is_trg

    @cached_property
    def extremally_disconnected(self) -> Verdict:
        return is_extremally_disconnected(self.tauG)

    @cached_property
    def components(self) -> tuple[int, ...]:
        return components(self.tauG)

    @cached_property
    def upper_components(self) -> tuple[int, ...]:
        return components(self.tau)

    def component_of(self, g: int, in_upper: bool = False) -> int:
        for c in (self.upper_components if in_upper else self.components):
            if c >> g & 1:
                return c
        raise ElementNotInG(f"{g} is not a point of the space")

    @cached_property
    def homogeneous(self) -> Verdict:
        return is_homogeneous(self.tauG)

    def __repr__(self):
        return (f"RoughStructure(op={self.op!r}, blocks={self.space.partition.as_lists()}, "
                f"G={list(members(self.G))}, tau={self.tau!r})")


def _require_rg(s: RoughStructure):
    if not s.is_rough_group:
        raise NotRoughGroup("G is not a rough group", witness=s.group.rough_group_verdict)
    return s.cert


def product_map(s: RoughStructure) -> MapTable:
    t = s.op.table
    dom = ProductSpace((s.tauG, s.tauG))
    return MapTable(dom, s.tau, {(x, y): t[x][y] for x, y in dom.points()})


def inverse_map(s: RoughStructure) -> MapTable:
    cert = _require_rg(s)
    return MapTable(s.tauG, s.tauG, {x: cert.inverse[x] for x in members(s.G)})


def triple_domain(s: RoughStructure) -> frozenset:
    t = s.op.table
    gs = members(s.G)
    up = s.upper
    return frozenset((x, y, z) for x in gs for y in gs for z in gs if up >> t[t[x][y]][z] & 1)


def triple_map(s: RoughStructure) -> MapTable:
    t = s.op.table
    dom = ProductSpace((s.tauG,) * 3, triple_domain(s))
    return MapTable(dom, s.tau, {(x, y, z): t[t[x][y]][z] for x, y, z in dom.points()})


def check_trg(s: RoughStructure, via_maps: bool = False) -> Verdict:
    """Continuity of the product map ``G x G -> upper(G)`` and of the inverse
    map ``G -> G``.

    The default path works on bit-sets; ``via_maps=True`` runs the generic
    map checks from :mod:`roughtop.fintop` instead (same verdict).
    """
    cert = _require_rg(s)
    if via_maps:
        v = is_continuous(product_map(s))
        if not v:
            return Verdict.no(v.witness, "product map not continuous: " + v.reason, "product")
        v = is_continuous(inverse_map(s))
        if not v:
            return Verdict.no(v.witness, "inverse map not continuous: " + v.reason, "inverse")
        return Verdict.yes()
    t = s.op.table
    mo = s.tau.mo
    gs = members(s.G)
    near = {x: members(s.mG(x)) for x in gs}
    for x in gs:
        row = t[x]
        for y in gs:
            target = mo[row[y]]
            for a in near[x]:
                ra = t[a]
                for b in near[y]:
                    if not target >> ra[b] & 1:
                        return Verdict.no(((x, y), (a, b), ra[b]),
                                          f"({a},{b}) is near ({x},{y}) but {ra[b]} escapes m({row[y]})",
                                          "product")
    inv = cert.inverse
    for x in gs:
        target = s.mG(inv[x])
        for a in near[x]:
            if not target >> inv[a] & 1:
                return Verdict.no((x, a, inv[a]), f"inverse of {a} escapes m_G({inv[x]})", "inverse")
    return Verdict.yes()


def triple_continuity(s: RoughStructure) -> Verdict:
    t = s.op.table
    mo = s.tau.mo
    dom = triple_domain(s)
    near = {x: members(s.mG(x)) for x in members(s.G)}
    for p in sorted(dom):
        x, y, z = p
        target = mo[t[t[x][y]][z]]
        for a in near[x]:
            for b in near[y]:
                ab = t[a][b]
                for c in near[z]:
                    if (a, b, c) in dom and not target >> t[ab][c] & 1:
                        return Verdict.no((p, (a, b, c), t[ab][c]),
                                          f"triple {(a, b, c)} near {p} escapes; " + TRIPLE_DOMAIN_NOTE,
                                          "triple")
    return Verdict.yes()


def check_strongly(s: RoughStructure) -> Verdict:
    if not s.is_trg:
        raise NotTopologicalRoughGroup("not a topological rough group", witness=s.trg)
    return s.triple


@dataclass(frozen=True)
class BaseAxioms:
    t6_i: Verdict
    t6_ii: Verdict
    t5: tuple[Verdict, Verdict, Verdict, Verdict, Verdict]

    def as_dict(self) -> dict[str, Verdict]:
        d = {"t6_i": self.t6_i, "t6_ii": self.t6_ii}
        for i, v in enumerate(self.t5):
            d[f"t5_{'i ii iii iv v'.split()[i]}"] = v
        return d


def check_base_axioms(s: RoughStructure) -> BaseAxioms:
    """Neighbourhood-base conditions evaluated on the canonical base of
    minimal open sets."""
    cert = _require_rg(s)
    op = s.op
    t = op.table
    gs = members(s.G)
    inv = cert.inverse

    t6_i = Verdict.yes()
    for g in gs:
        if cert.inv_set(s.mG(g)) != s.mG(inv[g]):
            t6_i = Verdict.no((g,), "m_G(g)^-1 != m_G(g^-1)")
            break
    t6_ii = Verdict.yes()
    for g in gs:
        for h in gs:
            if op.prod(s.mG(g), s.mG(h)) & ~s.tau.mo[t[g][h]]:
                t6_ii = Verdict.no((g, h), "m_G(g) m_G(h) not inside m(gh)")
                break
        if not t6_ii:
            break

    if not s.e_in_g or not s.g_open:
        why = "needs e in G" if not s.e_in_g else "needs G open in upper(G)"
        na = Verdict.not_applicable(why)
        return BaseAxioms(t6_i, t6_ii, (na,) * 5)

    e = s.e
    V = s.mG(e)
    G = s.G
    # base at e is the single minimal open V; every condition reduces to V
    c1 = Verdict.yes() if op.prod(V, V) & ~V == 0 else Verdict.no(members(V), "V^2 not inside V")
    c2 = Verdict.yes() if cert.inv_set(V) & ~V == 0 else Verdict.no(members(V), "V^-1 not inside V")
    c3 = Verdict.yes()
    for x in members(V):
        if op.right(V, x) & ~V:
            c3 = Verdict.no((x,), "Vx not inside V")
            break
    c4 = Verdict.yes()
    for g in gs:
        if op.right(op.left(g, V), inv[g]) & ~V:
            c4 = Verdict.no((g,), "gVg^-1 not inside V")
            break
    c5 = Verdict.yes() if V & G == V else Verdict.no(members(V), "V not inside G")
    return BaseAxioms(t6_i, t6_ii, (c1, c2, c3, c4, c5))


@dataclass(frozen=True)
class Translations:
    left: Verdict
    right: Verdict


def translations(s: RoughStructure, a: int) -> Translations:
    """Injectivity and continuity of ``x -> ax`` and ``x -> xa`` on G."""
    _require_rg(s)
    if not s.G >> a & 1:
        raise ElementNotInG(f"{a} is not in G")
    t = s.op.table
    gs = members(s.G)
    out = []
    for side in ("L", "R"):
        vals = {x: (t[a][x] if side == "L" else t[x][a]) for x in gs}
        if len(set(vals.values())) != len(vals):
            out.append(Verdict.no(None, f"{side}_{a} is not injective"))
            continue
        v = is_continuous(MapTable(s.tauG, s.tau, vals))
        out.append(v if not v else Verdict.yes())
    return Translations(*out)


@dataclass(frozen=True)
class ClosureComparison:
    lhs: int
    rhs: int
    equal: bool
    g_open: bool
    e_in_g: bool

    @property
    def hypotheses_hold(self) -> bool:
        return self.g_open and self.e_in_g


def identity_base_set(s: RoughStructure) -> int:
    """Smallest open neighbourhood of ``e`` traced on G, symmetrised."""
    cert = _require_rg(s)
    U = s.tau.mo[s.e] & s.G
    return U & cert.inv_set(U)


def closure_via_translates(s: RoughStructure, A: int) -> ClosureComparison:
    """Closure of ``A`` in G against the intersection of translates ``AU``.

    Since ``AU`` grows with ``U``, the intersection over a neighbourhood base
    at ``e`` equals ``AU`` for the smallest symmetric member.  Computed even
    when ``e`` is outside G or G is not open.
    """
    _require_rg(s)
    if A & ~s.G:
        raise ElementNotInG("A must be inside G", witness=members(A & ~s.G))
    lhs = s.tauG.closure(A)
    rhs = s.op.prod(A, identity_base_set(s))
    return ClosureComparison(lhs, rhs, lhs == rhs, s.g_open, s.e_in_g)


@dataclass(frozen=True)
class IdentityCore:
    H: int
    is_group: Verdict
    g_open: bool


def identity_core(s: RoughStructure) -> IdentityCore:
    cert = _require_rg(s)
    if not s.e_in_g:
        raise NotApplicable("e is not in G")
    H = s.mG(s.e)
    if cert.inv_set(H) != H:
        v = Verdict.no(members(H), "core is not symmetric")
    elif s.op.prod(H, H) != H:
        v = Verdict.no(members(s.op.prod(H, H)), "core squared differs from core")
    else:
        v = Verdict.yes()
    return IdentityCore(H, v, s.g_open)


@dataclass(frozen=True)
class MarkedSet:
    members: int
    open: bool
    closed: bool


@dataclass(frozen=True)
class SpecialSets:
    order2_set: MarkedSet
    commutant_of_g: MarkedSet
    square_roots_of_g: MarkedSet


def special_sets(s: RoughStructure, g: int) -> SpecialSets:
    """``{x: x^2=e}``, ``{x: xg=gx}`` and ``{x: x^2=g}`` inside G."""
    _require_rg(s)
    if not s.G >> g & 1:
        raise ElementNotInG(f"{g} is not in G")
    t = s.op.table
    e = s.e
    gs = members(s.G)
    sets = (
        sum(1 << x for x in gs if t[x][x] == e),
        sum(1 << x for x in gs if t[x][g] == t[g][x]),
        sum(1 << x for x in gs if t[x][x] == g),
    )
    top = s.tauG
    return SpecialSets(*(MarkedSet(S, top.is_open(S), top.is_closed(S)) for S in sets))
