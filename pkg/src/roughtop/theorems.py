"""Registry of executable properties and the sweep driver.

Each property pairs a hypothesis with a conclusion over one stream kind:

* ``structure``: rough structures ``(space, op, G, tau)``
* ``coset``: structures whose blocks are the cosets of a subgroup ``N`` and
  whose topology is traced from a group topology in which ``N`` is open
* ``hom``: verified rough homomorphisms (topology ignored)
* ``hom_top``: verified rough homomorphisms between topologised structures

Conclusions return a :class:`Verdict` whose witness names the failing
sub-object, so a violation report is self-explaining.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .core import (Verdict, check_rough_group, check_rough_subgroup, coset_report, members,
                   normality_flags, subset_order, subsets_of)
from .enumeration import digest, raw_digest
from .errors import GeneratorExhausted, UnknownProperty
from .fintop import MapTable, self_homeomorphisms
from .hom import (identity_and_inverse_preserved, kernel, openness, restricted_map,
                  transport_subgroup)
from .fintop import is_continuous
from .streams import (CosetItem, TopHom, catalogue_structures, coset_shards, cosets_in_shard,
                      default_ops, hom_shards, homs_in_shard, sampled_structures,
                      structure_shards, structures_in_shard, top_homs_in_shard)
from .trg import (RoughStructure, check_base_axioms, closure_via_translates, identity_core,
                  special_sets, translations)

DEGENERATE = "degenerate at finite scale: Hausdorff finite spaces are discrete"
YES = Verdict.yes()


@dataclass(frozen=True)
class PropertyEntry:
    id: str
    section: str
    stream: str
    anchor: str
    hypothesis: Callable
    conclusion: Callable
    expected: str = "holds"
    note: str = ""

    def summary(self) -> dict:
        return {"id": self.id, "section": self.section, "stream": self.stream,
                "anchor": self.anchor, "expected": self.expected, "note": self.note}


def _all(pairs: Iterable[tuple[bool, object]], reason: str) -> Verdict:
    bad = [w for ok, w in pairs if not ok]
    return YES if not bad else Verdict.no(bad, reason)


def _inv(s, A: int) -> int:
    return s.cert.inv_set(A)


def _sym_core(s) -> int:
    V = s.mG(s.e)
    return V & _inv(s, V)


def _open_nbhds_of_e(s):
    """Open sets of G containing e, smallest first."""
    return [U for U in s.tauG.opens() if U >> s.e & 1]


def _trg(s) -> bool:
    return s.is_trg


def _trg_e_open(s) -> bool:
    return s.is_trg and s.e_in_g and s.g_open


def _ed_t2(s) -> bool:
    return s.is_trg and bool(s.sep.T2) and bool(s.extremally_disconnected)


# --- preliminaries ----------------------------------------------------------

def _rem_2_8(s):
    return YES if s.is_topological_group else Verdict.no(None, "G*G = G yet not a topological group")


# --- separation -------------------------------------------------------------

def _t1(s):
    return s.sep.T1


def _e_closed_in_g(s):
    e = 1 << s.e
    return YES if s.tauG.is_closed(e) else Verdict.no(members(s.tauG.closure(e)), "{e} not closed in G")


def _e_not_in_point_closures(s):
    return _all(((not s.tauG.closure(1 << g) >> s.e & 1, g) for g in members(s.G & ~(1 << s.e))),
                "e in the closure of {g}")


def _e_clopen_in_g(s):
    e = 1 << s.e
    return YES if s.tauG.is_clopen(e) else Verdict.no(None, "{e} not clopen in G")


def _t2(s):
    return s.sep.T2


def _separate_e(s):
    me = s.mG(s.e)
    return _all(((me & s.mG(g) == 0, g) for g in members(s.G & ~(1 << s.e))),
                "e and g share every neighbourhood pair")


# --- neighbourhoods ---------------------------------------------------------

def _t6_hyp(s):
    if not s.is_rough_group:
        return False
    ax = check_base_axioms(s)
    return bool(ax.t6_i) and bool(ax.t6_ii)


def _sym_square(s):
    """Smallest symmetric open V around e inside G; if it fails every
    candidate fails, since any admissible V contains it."""
    V = _sym_core(s)
    if not s.tauG.is_open(V):
        return Verdict.no(members(V), "symmetric core is not open")
    if s.op.prod(V, V) & ~s.tau.mo[s.e]:
        return Verdict.no(members(V), "V^2 leaves the minimal open of e")
    return YES


def _translations(s):
    bad = []
    for a in members(s.G):
        tr = translations(s, a)
        if not tr.left or not tr.right:
            bad.append(a)
    inv = MapTable(s.tauG, s.tauG, {x: s.cert.inverse[x] for x in members(s.G)})
    if not is_continuous(inv):
        bad.append("inverse")
    return YES if not bad else Verdict.no(bad, "translation or inverse fails")


def _translate_bases(s):
    V = s.mG(s.e)
    G = s.G
    return _all(((s.op.left(g, V) & G == s.mG(g) and s.op.right(V, g) & G == s.mG(g), g)
                 for g in members(G)), "translated base differs from the minimal open")


def _interior_transfer(s):
    top = s.tauG
    bad = []
    for g in members(s.G):
        for U in subsets_of(s.G):
            if top.interior(s.op.left(g, U) & s.G) and not top.interior(U):
                bad.append((g, members(U)))
    return YES if not bad else Verdict.no(bad, "interior of gU n G non-empty but U has empty interior")


def _au_neighbourhoods(s):
    top = s.tauG
    bad = []
    for U in _open_nbhds_of_e(s):
        for A in subsets_of(s.G):
            if not A:
                continue
            hull = top.open_hull(A)
            for side, P in (("AU", s.op.prod(A, U)), ("UA", s.op.prod(U, A))):
                if hull & ~(P & s.G):
                    bad.append((side, members(A), members(U)))
    return YES if not bad else Verdict.no(bad, "translate is not a neighbourhood of A")


def _closure_translates(s):
    bad = [members(A) for A in sorted(subsets_of(s.G)) if not closure_via_translates(s, A).equal]
    return YES if not bad else Verdict.no(bad, "closure differs from the intersection of AU")


def _base_conditions(s):
    ax = check_base_axioms(s)
    bad = [k for k, v in ax.as_dict().items() if k.startswith("t5") and not v]
    return YES if not bad else Verdict.no(bad, "base condition fails")


def _prop_4_13_hyp(s):
    return s.is_trg and (s.e_in_g or s.e_open_in_upper)


def _prop_4_13(s):
    if s.e_in_g:
        V = _sym_core(s)
        me = s.mG(s.e)
        if not s.tauG.is_open(V) or s.op.prod(V, V) & s.G & ~me:
            return Verdict.no(("part1", members(V)), "no symmetric V with V^2 n G inside U")
    if s.e_open_in_upper and not s.tauG.is_discrete():
        return Verdict.no(("part2",), "{e} open in the upper approximation but G not discrete")
    return YES


def _fixed_points(s):
    top = s.tauG
    bad = []
    for h in self_homeomorphisms(top):
        F = sum(1 << x for x, y in h.items() if x == y)
        if not top.is_clopen(F):
            bad.append(members(F))
    return YES if not bad else Verdict.no(bad, "fixed point set not clopen")


def _ed_hyp(s):
    return _ed_t2(s) and s.e_in_g and s.g_open


def _involution_nbhd(s):
    t, e, top = s.op.table, s.e, s.tauG
    for O in top.opens():
        if not O >> e & 1 or not top.is_closed(O):
            continue
        ms = members(O)
        if all(t[a][a] == e for a in ms) and all(t[a][b] == t[b][a] for a in ms for b in ms):
            return YES
    return Verdict.no(None, "no clopen abelian neighbourhood of e made of involutions")


def _order2_commute(s):
    t, e = s.op.table, s.e
    V = s.mG(e)
    bad = []
    for g in members(s.G):
        if g == e or t[g][g] != e:
            continue
        W = V | s.op.left(g, V)
        if any(t[g][x] != t[x][g] for x in members(W)):
            bad.append(g)
    return YES if not bad else Verdict.no(bad, "g does not commute with V u gV")


def _centraliser_clopen(s):
    bad = []
    for g in members(s.G):
        if s.op.left(g, s.G) != s.op.right(s.G, g):
            continue
        ss = special_sets(s, g)
        C = ss.commutant_of_g
        if not (C.open and C.closed and C.members >> g & 1):
            bad.append(g)
    return YES if not bad else Verdict.no(bad, "centraliser not a clopen neighbourhood")


def _roots_clopen(s):
    bad = []
    for g in members(s.G):
        if s.op.left(g, s.G) != s.G:
            continue
        R = special_sets(s, g).square_roots_of_g
        if not (R.open and R.closed):
            bad.append(g)
    return YES if not bad else Verdict.no(bad, "square roots not clopen")


# --- subgroups --------------------------------------------------------------

def _core_is_group(s):
    return identity_core(s).is_group


def _three_order_sets(s):
    out = []
    for H in sorted(subsets_of(s.G)):
        if H and _inv(s, H) == H and subset_order(s.group, H, cap=3).order == 3:
            out.append(H)
    return out


def _lem_5_7_hyp(s):
    return s.is_trg and bool(_three_order_sets(s))


def _lem_5_7(s):
    bad = [members(H) for H in _three_order_sets(s) if not coset_report(s.group, H).disjoint_or_equal]
    return YES if not bad else Verdict.no(bad, "two cosets overlap without being equal")


def _rough_subgroups(s) -> list[int]:
    def build():
        return [H for H in sorted(subsets_of(s.G)) if H and check_rough_subgroup(s.group, H)]
    return s.group.cached("rough_subgroups", build)


def _prop_5_5(item: CosetItem):
    s = item.structure
    op, space = s.op, s.space
    bad = []
    for H in _rough_subgroups(s):
        HN = op.prod(H, item.N)
        C = s.tau.closure(H)
        up = space.upper
        if not (up(C) == up(C & s.G) == up(H) == HN):
            bad.append(("1", members(H)))
            continue
        ok, _ = check_rough_group(space, op, C)
        if not ok:
            bad.append(("2-rough", members(H)))
        else:
            sc = RoughStructure(space, op, C, item.theta(up(C)))
            if not sc.is_trg:
                bad.append(("2-trg", members(H)))
        D = s.tauG.closure(H)
        if not check_rough_subgroup(s.group, D) or up(D) != HN:
            bad.append(("3", members(H)))
    return YES if not bad else Verdict.no(bad, "closure transport fails")


def _coset_trg(item: CosetItem) -> bool:
    return item.structure.is_trg


def _thm_5_8_hyp(item: CosetItem) -> bool:
    s = item.structure
    return s.is_topological_group and bool(_thm_5_8_targets(s))


def _thm_5_8_targets(s):
    return [H for H in _rough_subgroups(s)
            if s.tauG.is_open(H) and subset_order(s.group, H, cap=3).order == 3]


def _thm_5_8(item: CosetItem):
    s = item.structure
    bad = [members(H) for H in _thm_5_8_targets(s) if not s.tauG.is_closed(H)]
    return YES if not bad else Verdict.no(bad, "open 3-order rough subgroup is not closed")


def _discrete_normal(s, need_e: bool):
    out = []
    for H in _rough_subgroups(s):
        if need_e and not H >> s.e & 1:
            continue
        if not all(s.mG(h) & H == 1 << h for h in members(H)):
            continue
        if normality_flags(s.group, H).normal:
            out.append(H)
    return out


def _prop_5_9_hyp(s):
    return s.is_topological_group and s.g_open and bool(_discrete_normal(s, False))


def _prop_5_9(s):
    t = s.op.table
    V = _sym_core(s)
    bad = []
    for H in _discrete_normal(s, False):
        for x in members(H):
            if any(t[x][y] != t[y][x] for y in members(V)):
                bad.append((members(H), x))
    return YES if not bad else Verdict.no(bad, "x fails to commute with the symmetric core")


def _components(s):
    inv = s.cert.inverse
    comp = {g: s.component_of(g) for g in members(s.G)}
    ce = s.component_of(s.e, in_upper=True)
    bad = []
    for g in members(s.G):
        if _inv(s, comp[g]) != comp[inv[g]]:
            bad.append(("1", g))
        if s.op.prod(comp[g], _inv(s, comp[g])) & ~ce:
            bad.append(("2", g))
        if not s.tauG.is_closed(comp[g]):
            bad.append(("3", g))
    if s.e_in_g and s.op.prod(comp[s.e], comp[s.e]) & ~ce:
        bad.append(("4", s.e))
    return YES if not bad else Verdict.no(bad, "component property fails")


def _blocks_open(s) -> bool:
    return all(s.tau.is_open(b) for b in s.space.partition.blocks if b & s.upper)


def _prop_5_12_hyp(s):
    return s.is_trg and s.e_in_g and _blocks_open(s)


def _prop_5_12(s):
    C = s.component_of(s.e)
    if not check_rough_subgroup(s.group, C):
        return Verdict.no(members(C), "component of e is not a rough subgroup")
    if not s.tauG.is_closed(C):
        return Verdict.no(members(C), "component of e is not closed")
    return YES


def _prop_5_13_hyp(s):
    return (_prop_5_12_hyp(s) and s.g_open and len(s.components) == 1)


def _prop_5_13(s):
    # the smallest neighbourhood of e is m_G(e); a witness V must sit inside it
    V = s.mG(s.e)
    ok, _ = check_rough_group(s.space, s.op, V)
    return YES if ok else Verdict.no(members(V), "no open rough group inside m_G(e)")


def _prop_5_14_hyp(s):
    return (s.is_topological_group and len(s.components) == 1
            and bool(_discrete_normal(s, True)))


def _prop_5_14(s):
    t = s.op.table
    bad = [(members(H), x) for H in _discrete_normal(s, True) for x in members(H)
           if any(t[x][g] != t[g][x] for g in members(s.G))]
    return YES if not bad else Verdict.no(bad, "element outside the centre")


# --- homomorphisms ----------------------------------------------------------

def _always(_):
    return True


def _kernel_nonempty(h):
    return not kernel(h).empty


def _kernel_subgroup(h):
    k = kernel(h)
    if not k.subgroup:
        return Verdict.no(members(k.kernel), "kernel is not a rough subgroup")
    if not k.weakly_rough_normal:
        return Verdict.no(members(k.kernel), "kernel is not weakly rough normal")
    return YES


def _kernel_square(h):
    return kernel(h).square_maps_to_e


def _forward(h):
    bad = []
    for H in _rough_subgroups(h.source):
        tr = transport_subgroup(h, H, "forward")
        if not tr.subgroup or tr.normality is not None and not tr.normality:
            bad.append(members(H))
    return YES if not bad else Verdict.no(bad, "image is not a (normal) rough subgroup")


def _backward(h):
    bad = []
    for H in _rough_subgroups(h.target):
        tr = transport_subgroup(h, H, "backward")
        if not tr.subgroup or tr.normality is not None and not tr.normality:
            bad.append(members(H))
    return YES if not bad else Verdict.no(bad, "preimage is not a (weakly normal) rough subgroup")


def _source_group(h):
    return h.source.group.is_group


def _target_group(h):
    return YES if h.target.group.is_group else Verdict.no(members(h.target.G), "G2*G2 leaves G2")


def side_hypothesis(s) -> bool:
    """Per-side hypotheses of the open mapping entry."""
    return s.is_trg and bool(s.sep.T2) and s.e_in_g and s.g_open


def _open_map_hyp(th: TopHom) -> bool:
    h = th.hom
    return (side_hypothesis(h.source) and side_hypothesis(h.target)
            and bool(is_continuous(restricted_map(h))))


def _open_map(th: TopHom):
    return openness(th.hom).open


# --- registry ---------------------------------------------------------------

def _entry(id, stream, anchor, hyp, concl, **kw) -> PropertyEntry:
    section = id.split("-")[1].split(".")[0]
    return PropertyEntry(id, section, stream, anchor, hyp, concl, **kw)


S, C, H, HT = "structure", "coset", "hom", "hom_top"

REGISTRY: dict[str, PropertyEntry] = {e.id: e for e in [
    _entry("REM-2.8", S, "a TRG with G*G = G is a topological group",
           lambda s: s.is_trg and s.op.prod(s.G, s.G) == s.G, _rem_2_8),
    _entry("THM-3.3", S, "TRG with upper(G) T0 => G is T1",
           lambda s: s.is_trg and bool(s.upper_sep.T0), _t1),
    _entry("PROP-3.6", S, "T0 TRG with e in G => {e} closed in G",
           lambda s: s.is_trg and bool(s.sep.T0) and s.e_in_g, _e_closed_in_g),
    _entry("PROP-3.7", S, "T0 TRG with e in G => e outside cl{g} for g != e",
           lambda s: s.is_trg and bool(s.sep.T0) and s.e_in_g, _e_not_in_point_closures),
    _entry("COR-3.8", S, "finite T0 TRG with e in G => {e} clopen in G",
           lambda s: s.is_trg and bool(s.sep.T0) and s.e_in_g, _e_clopen_in_g),
    _entry("THM-3.10", S, "TRG with {e} closed in upper(G) => G Hausdorff",
           lambda s: s.is_trg and s.e_closed_in_upper, _t2),
    _entry("COR-3.11", S, "TRG with upper(G) T1 => G Hausdorff",
           lambda s: s.is_trg and bool(s.upper_sep.T1), _t2),
    _entry("PROP-3.13", S, "T1 TRG with e in G => e and g != e have disjoint neighbourhoods",
           lambda s: s.is_trg and bool(s.sep.T1) and s.e_in_g, _separate_e),
    _entry("THM-3.14", S, "T0 strongly TRG => Hausdorff",
           lambda s: bool(s.strongly) and bool(s.sep.T0), _t2),
    _entry("THM-4.1", S, "base conditions (i)-(ii) on minimal opens => TRG",
           _t6_hyp, lambda s: s.trg,
           note="evaluated with the canonical base of minimal open sets"),
    _entry("PROP-4.4", S, "TRG, e in G, U open around e => symmetric open V with V^2 in U",
           lambda s: s.is_trg and s.e_in_g, _sym_square),
    _entry("PROP-4.5", S, "translations are injective and continuous; inversion is a homeomorphism",
           _trg, _translations),
    _entry("PROP-4.6", S, "G open, e in G => translated bases are neighbourhood bases",
           _trg_e_open, _translate_bases),
    _entry("PROP-4.7", S, "G open, e in G => int(gU n G) non-empty forces int(U) non-empty",
           _trg_e_open, _interior_transfer),
    _entry("PROP-4.8", S, "G open, e in G => AU n G and UA n G are neighbourhoods of A",
           _trg_e_open, _au_neighbourhoods),
    _entry("PROP-4.9", S, "G open, e in G => closure of A is the intersection of AU",
           _trg_e_open, _closure_translates,
           note="intersection over symmetric open neighbourhoods equals A times the smallest one"),
    _entry("THM-4.11", S, "G open, e in G => base conditions (i)-(v) hold",
           _trg_e_open, _base_conditions, note="evaluated on the canonical base"),
    _entry("PROP-4.13", S, "e in G => symmetric V with V^2 n G in U; {e} open => G discrete",
           _prop_4_13_hyp, _prop_4_13),
    _entry("THM-4.14", S, "ED Hausdorff => fixed points of a self-homeomorphism are clopen",
           _ed_t2, _fixed_points, note=DEGENERATE),
    _entry("THM-4.15", S, "ED Hausdorff TRG, G open, e in G => clopen abelian involution nbhd",
           _ed_hyp, _involution_nbhd, note=DEGENERATE),
    _entry("COR-4.16", S, "ED Hausdorff TRG, g of order 2 => g commutes with V u gV",
           _ed_hyp, _order2_commute, note=DEGENERATE),
    _entry("THM-4.17", S, "ED Hausdorff TRG, gG = Gg => centraliser clopen neighbourhood of g",
           _ed_t2, _centraliser_clopen, note=DEGENERATE),
    _entry("THM-4.18", S, "ED Hausdorff TRG, gG = G => square roots of g clopen",
           _ed_t2, _roots_clopen, note=DEGENERATE),
    _entry("PROP-5.1", S, "G open, e in G => intersection of neighbourhoods of e is a group",
           _trg_e_open, _core_is_group),
    _entry("PROP-5.5", C, "closures of a rough subgroup keep the upper approximation HN",
           _coset_trg, _prop_5_5, note="coset stream: blocks are N-cosets, tau traced from a group topology"),
    _entry("LEM-5.7", S, "3-order H => cosets gH, hH equal or disjoint",
           _lem_5_7_hyp, _lem_5_7),
    _entry("THM-5.8", C, "open 3-order topological rough subgroup w.r.t. open N is closed",
           _thm_5_8_hyp, _thm_5_8,
           note="G ranges over coset-stream structures with G*G inside G"),
    _entry("PROP-5.9", S, "discrete normal rough subgroup commutes with a neighbourhood of e",
           _prop_5_9_hyp, _prop_5_9, note="restricted to G*G inside G"),
    _entry("PROP-5.11", S, "component identities for a TRG",
           _trg, _components),
    _entry("PROP-5.12", S, "blocks are components of a coarser topology => C_G(e) closed rough subgroup",
           _prop_5_12_hyp, _prop_5_12,
           note="hypothesis read as: every block inside upper(G) is open"),
    _entry("PROP-5.13", S, "connected open G under the same hypothesis => small open rough group at e",
           _prop_5_13_hyp, _prop_5_13),
    _entry("PROP-5.14", S, "discrete normal rough subgroup of a connected group lies in the centre",
           _prop_5_14_hyp, _prop_5_14, note="restricted to G*G inside G"),
    _entry("PROP-6.2", H, "phi(e1) = e2 and phi(g^-1) = phi(g)^-1",
           _always, identity_and_inverse_preserved),
    _entry("PROP-6.5", H, "non-empty kernel is a weakly rough normal rough subgroup",
           _kernel_nonempty, _kernel_subgroup),
    _entry("PROP-6.6", H, "phi(ker^2) = {e2}", _kernel_nonempty, _kernel_square),
    _entry("PROP-6.7", H, "image of a (normal) rough subgroup is a (normal) rough subgroup",
           _always, _forward),
    _entry("PROP-6.8", H, "preimage of a (weakly normal) rough subgroup is one in G1",
           _always, _backward),
    _entry("PROP-6.9", H, "G1 a group => G2 a group", _source_group, _target_group),
    _entry("THM-6.10", HT, "continuous rough hom between Hausdorff TRGs with e in G, G open is open",
           _open_map_hyp, _open_map,
           note=DEGENERATE + "; local and sigma compactness always hold"),
]}


def _drop_upper_t0(s):
    return s.is_trg


MUTATIONS: dict[str, PropertyEntry] = {
    "THM-3.3/no-upper-t0": replace(REGISTRY["THM-3.3"], id="THM-3.3/no-upper-t0",
                                   hypothesis=_drop_upper_t0, expected="fails",
                                   note="upper(G) T0 hypothesis removed"),
    "PROP-4.9/no-hypotheses": replace(REGISTRY["PROP-4.9"], id="PROP-4.9/no-hypotheses",
                                      hypothesis=_drop_upper_t0, expected="fails",
                                      note="G open and e in G removed"),
}


def get_entry(id_or_entry) -> PropertyEntry:
    if isinstance(id_or_entry, PropertyEntry):
        return id_or_entry
    try:
        return REGISTRY.get(id_or_entry) or MUTATIONS[id_or_entry]
    except KeyError:
        raise UnknownProperty(f"unknown property {id_or_entry!r}") from None


def list_properties(section: str | None = None) -> list[PropertyEntry]:
    """Registry order; ``section`` keeps entries whose number starts with it."""
    out = list(REGISTRY.values())
    if section is not None:
        out = [e for e in out if e.section == str(section)]
    return out


# --- sweeps -----------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """``exhaustive`` over named op families up to ``n_max``, ``catalogue``,
    or ``sampled`` random structures drawn with ``seed``."""

    kind: str = "exhaustive"
    n_max: int = 4
    ops: tuple[str, ...] | None = None
    seed: int = 0
    samples: int = 2000
    budget: int | None = None

    def op_list(self) -> list[str]:
        return list(self.ops) if self.ops else default_ops(self.n_max)


@dataclass(frozen=True)
class Violation:
    n: int
    digest: str
    witness: object
    label: str = ""

    def as_dict(self) -> dict:
        return {"n": self.n, "digest": self.digest, "witness": _jsonable(self.witness),
                "label": self.label}


@dataclass
class SweepReport:
    id: str
    examined: int = 0
    hits: int = 0
    violations: list[Violation] = field(default_factory=list)
    note: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def counterexample(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def as_dict(self, timing: bool = True) -> dict:
        d = {"id": self.id, "examined": self.examined, "hits": self.hits,
             "violations": [v.as_dict() for v in self.violations], "note": self.note}
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (int, str, float, bool)) or x is None:
        return x
    return repr(x)


def _item_digest(item) -> tuple[int, str]:
    if isinstance(item, RoughStructure):
        return item.n, digest(item)
    if isinstance(item, CosetItem):
        return item.n, raw_digest(digest(item.structure), item.K, item.N)
    if isinstance(item, TopHom):
        h = item.hom
        return item.n, raw_digest(digest(h.source), digest(h.target), sorted(h.values.items()))
    h = item
    return max(h.source.n, h.target.n), raw_digest(digest(h.source), digest(h.target),
                                                    sorted(h.values.items()))


def _shards(stream: str, gen: GeneratorSpec) -> list[tuple]:
    ops = gen.op_list()
    if stream == S:
        return structure_shards(ops)
    if stream == C:
        return coset_shards(ops)
    if stream in (H, HT):
        return [(stream,) + sh[1:] for sh in hom_shards(ops)]
    raise ValueError(stream)


def _items(shard: tuple):
    kind = shard[0]
    if kind == S:
        return structures_in_shard(shard)
    if kind == C:
        return cosets_in_shard(shard)
    if kind == H:
        return homs_in_shard(shard)
    if kind == HT:
        return top_homs_in_shard(shard, side_hypothesis)
    raise ValueError(kind)


def _evaluate(entries: list[PropertyEntry], items, labels=None) -> dict[str, list]:
    """Per entry: [examined, hits, violations]."""
    acc = {e.id: [0, 0, []] for e in entries}
    for idx, item in enumerate(items):
        for e in entries:
            a = acc[e.id]
            a[0] += 1
            if not e.hypothesis(item):
                continue
            a[1] += 1
            v = e.conclusion(item)
            if not v:
                n, d = _item_digest(item)
                label = labels[idx] if labels else ""
                a[2].append(Violation(n, d, v.witness, label))
    return acc


def _run_shard(args) -> dict[str, list]:
    ids, shard = args
    entries = [get_entry(i) for i in ids]
    return _evaluate(entries, _items(shard))


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ROUGHTOP_THREADS", "1")))
    except ValueError:
        return 1


def _catalogue_items(stream: str):
    from .hom import RoughHom
    named = catalogue_structures()
    if stream == S:
        return [s for _, s in named], [i for i, _ in named]
    if stream == H:
        return [RoughHom.identity(s) for _, s in named], [f"id:{i}" for i, _ in named]
    return [], []


def sweep(entries: Iterable, gen: GeneratorSpec = GeneratorSpec(),
          workers: int | None = None) -> list[SweepReport]:
    """Evaluate several properties over their streams and merge by digest."""
    entries = [get_entry(e) for e in entries]
    workers = worker_count() if workers is None else workers
    totals = {e.id: [0, 0, []] for e in entries}
    started = time.perf_counter()
    by_stream: dict[str, list[PropertyEntry]] = {}
    for e in entries:
        by_stream.setdefault(e.stream, []).append(e)

    for stream, group in by_stream.items():
        if gen.kind == "catalogue":
            items, labels = _catalogue_items(stream)
            results = [_evaluate(group, items, labels)]
        elif gen.kind == "sampled":
            if stream != S:
                continue
            items = list(sampled_structures(gen.seed, gen.samples, 1, gen.n_max))
            results = [_evaluate(group, items)]
        else:
            ids = [e.id for e in group]
            jobs = [(ids, sh) for sh in _shards(stream, gen)]
            if workers > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    results = list(pool.map(_run_shard, jobs, chunksize=1))
            else:
                results = [_run_shard(j) for j in jobs]
        for res in results:
            for k, (ex, hits, viol) in res.items():
                t = totals[k]
                t[0] += ex
                t[1] += hits
                t[2].extend(viol)
            if gen.budget is not None and sum(t[0] for t in totals.values()) > gen.budget:
                raise GeneratorExhausted("sweep budget exhausted", partial=_reports(entries, totals, started))

    return _reports(entries, totals, started)


def _reports(entries, totals, started) -> list[SweepReport]:
    elapsed = time.perf_counter() - started
    out = []
    for e in entries:
        ex, hits, viol = totals[e.id]
        viol = sorted(viol, key=lambda v: (v.n, v.digest, v.label))
        out.append(SweepReport(e.id, ex, hits, viol, e.note, elapsed))
    return out


def run_property(id_or_entry, generator_spec: GeneratorSpec = GeneratorSpec(),
                 workers: int | None = None) -> SweepReport:
    return sweep([id_or_entry], generator_spec, workers)[0]


def run_all(gen: GeneratorSpec = GeneratorSpec(), only: str | None = None,
            workers: int | None = None) -> list[SweepReport]:
    ids = [only] if only else list(REGISTRY)
    return sweep(ids, gen, workers)


__all__ = ["PropertyEntry", "REGISTRY", "MUTATIONS", "GeneratorSpec", "SweepReport", "Violation",
           "list_properties", "run_property", "run_all", "sweep", "get_entry", "worker_count"]
