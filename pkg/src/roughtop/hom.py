"""Rough homomorphisms between rough structures."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .core import Verdict, check_rough_subgroup, members, normality_flags, subsets_of
from .errors import (CarrierMismatch, HomNotVerified, NotASubgroup, NotContinuous,
                     NotRoughGroup, NotSurjective)
from .fintop import MapTable, is_continuous, is_open_map
from .trg import RoughStructure

ORACLE_CAP = 16
ISOMORPHISM_NOTE = ("rough isomorphism read as a bijective rough homomorphism on the upper "
                    "approximation; no rough-hom inverse is demanded")


class RoughHom:
    """A map ``phi`` from the upper approximation of ``G1`` to that of ``G2``."""

    def __init__(self, source: RoughStructure, target: RoughStructure, values: Mapping[int, int]):
        self.source = source
        self.target = target
        self.values = {int(k): int(v) for k, v in values.items()}
        if set(self.values) != set(members(source.upper)):
            raise CarrierMismatch("map must be defined on exactly the source upper approximation",
                                  witness=sorted(set(members(source.upper)) ^ set(self.values)))
        for x, y in self.values.items():
            if not target.upper >> y & 1:
                raise CarrierMismatch(f"phi({x}) = {y} lies outside the target upper approximation",
                                      witness=(x, y))

    def __call__(self, x: int) -> int:
        return self.values[x]

    def image(self, A: int) -> int:
        out = 0
        for x in members(A):
            out |= 1 << self.values[x]
        return out

    def preimage(self, B: int) -> int:
        out = 0
        for x, y in self.values.items():
            if B >> y & 1:
                out |= 1 << x
        return out

    @cached_property
    def verdict(self) -> "HomVerdict":
        return check_rough_hom(self)

    @classmethod
    def identity(cls, s: RoughStructure) -> "RoughHom":
        return cls(s, s, {x: x for x in members(s.upper)})


@dataclass(frozen=True)
class HomVerdict:
    cond1: Verdict
    cond2: Verdict
    cond3: Verdict

    @property
    def ok(self) -> bool:
        return bool(self.cond1 and self.cond2 and self.cond3)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def first_failure(self) -> Verdict | None:
        for v in (self.cond1, self.cond2, self.cond3):
            if not v:
                return v
        return None


def _require_groups(h: RoughHom):
    for side, s in (("source", h.source), ("target", h.target)):
        if not s.is_rough_group:
            raise NotRoughGroup(f"{side} is not a rough group")


def _cond1(h: RoughHom) -> Verdict:
    img = h.image(h.source.G)
    if img == h.target.G:
        return Verdict.yes()
    return Verdict.no({"missing": members(h.target.G & ~img), "extra": members(img & ~h.target.G)},
                      "phi(G1) differs from G2", 1)


def _cond2(h: RoughHom) -> Verdict:
    s, t = h.source, h.target
    t1, t2 = s.op.table, t.op.table
    dom = members(s.G | 1 << s.e)
    phi = h.values
    for x in dom:
        for y in dom:
            if phi[t1[x][y]] != t2[phi[x]][phi[y]]:
                return Verdict.no((x, y), "phi(xy) != phi(x)phi(y)", 2)
    return Verdict.yes()


def _cond3_singletons(h: RoughHom) -> Verdict:
    s, t = h.source, h.target
    for x in members(s.G):
        lhs = s.space.upper(1 << x)
        rhs = h.preimage(t.space.upper(1 << h.values[x]))
        if lhs != rhs:
            return Verdict.no((x,), "upper approximation not pulled back", 3)
    return Verdict.yes()


def _cond3_oracle(h: RoughHom) -> Verdict:
    s, t = h.source, h.target
    if bin(s.G).count("1") > ORACLE_CAP:
        raise CarrierMismatch(f"all-subsets oracle is limited to |G1| <= {ORACLE_CAP}")
    for H in sorted(subsets_of(s.G)):
        if H == 0:
            continue
        if s.space.upper(H) != h.preimage(t.space.upper(h.image(H))):
            return Verdict.no(members(H), "upper approximation not pulled back", 3)
    return Verdict.yes()


def check_rough_hom(h: RoughHom, oracle: bool = False) -> HomVerdict:
    """Check the three rough-homomorphism conditions.

    Condition (3) is tested on singletons, which is exact because upper
    approximation, image and preimage all commute with unions.  ``oracle``
    switches to the literal quantification over every subset of G1.
    """
    _require_groups(h)
    missing = h.target.upper & ~h.image(h.source.upper)
    if missing:
        raise NotSurjective("phi does not cover the target upper approximation",
                            witness=members(missing))
    c3 = _cond3_oracle(h) if oracle else _cond3_singletons(h)
    return HomVerdict(_cond1(h), _cond2(h), c3)


def identity_and_inverse_preserved(h: RoughHom) -> Verdict:
    """``phi(e1) = e2`` and ``phi(g^-1) = phi(g)^-1`` on G1."""
    s, t = h.source, h.target
    if h.values[s.e] != t.e:
        return Verdict.no((s.e,), "phi(e1) != e2")
    for g in members(s.G):
        if h.values[s.cert.inverse[g]] != t.cert.inverse[h.values[g]]:
            return Verdict.no((g,), "phi(g^-1) != phi(g)^-1")
    return Verdict.yes()


def _require_verified(h: RoughHom):
    v = h.verdict
    if not v:
        raise HomNotVerified("map is not a rough homomorphism", witness=v.first_failure)


@dataclass(frozen=True)
class KernelReport:
    kernel: int
    subgroup: Verdict | None = None
    weakly_rough_normal: Verdict | None = None
    square_maps_to_e: Verdict | None = None

    @property
    def empty(self) -> bool:
        return self.kernel == 0


def kernel(h: RoughHom) -> KernelReport:
    _require_verified(h)
    s, t = h.source, h.target
    K = sum(1 << x for x in members(s.G) if h.values[x] == t.e)
    if not K:
        return KernelReport(0)
    sq = h.image(s.op.prod(K, K))
    sq_v = Verdict.yes() if sq == 1 << t.e else Verdict.no(members(sq), "phi(ker^2) != {e2}")
    return KernelReport(K, check_rough_subgroup(s.group, K),
                        normality_flags(s.group, K).weakly_rough_normal, sq_v)


@dataclass(frozen=True)
class Transport:
    subset: int
    subgroup: Verdict
    normality: Verdict | None = None


def transport_subgroup(h: RoughHom, H: int, direction: str = "forward") -> Transport:
    """Push a rough subgroup forward along ``phi`` or pull one back into G1."""
    _require_verified(h)
    s, t = h.source, h.target
    if direction == "forward":
        src, dst = s, t
    elif direction == "backward":
        src, dst = t, s
    else:
        raise ValueError("direction must be 'forward' or 'backward'")
    if H == 0 or H & ~src.G or not check_rough_subgroup(src.group, H):
        raise NotASubgroup("H is not a rough subgroup", witness=members(H))
    if direction == "forward":
        out = h.image(H)
    else:
        out = h.preimage(H) & s.G
    if out == 0:
        return Transport(0, Verdict.no(None, "transported set is empty", 0))
    sub = check_rough_subgroup(dst.group, out)
    src_flags = normality_flags(src.group, H)
    norm = None
    if direction == "forward" and src_flags.normal:
        norm = normality_flags(dst.group, out).normal
    elif direction == "backward" and src_flags.weakly_rough_normal:
        norm = normality_flags(dst.group, out).weakly_rough_normal
    return Transport(out, sub, norm)


@dataclass(frozen=True)
class OpennessReport:
    open: Verdict
    flags: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.flags.values())


def restricted_map(h: RoughHom) -> MapTable:
    """``phi`` restricted to ``G1 -> G2`` with the subspace topologies."""
    return MapTable(h.source.tauG, h.target.tauG, {x: h.values[x] for x in members(h.source.G)})


def openness(h: RoughHom) -> OpennessReport:
    """Openness of ``phi`` on G1, after checking that it is continuous.

    Local compactness and sigma-compactness hold for every finite space, so
    those two flags are constant.
    """
    _require_verified(h)
    f = restricted_map(h)
    cont = is_continuous(f)
    if not cont:
        raise NotContinuous("phi is not continuous on G1", witness=cont.witness)
    s, t = h.source, h.target
    flags = {
        "e1_in_G1": s.e_in_g,
        "e2_in_G2": t.e_in_g,
        "G1_open": s.g_open,
        "G2_open": t.g_open,
        "locally_compact": True,
        "sigma_compact": True,
    }
    return OpennessReport(is_open_map(f), flags)


def is_rough_isomorphism(h: RoughHom) -> Verdict:
    if not h.verdict:
        return Verdict.no(h.verdict.first_failure, "not a rough homomorphism")
    if len(set(h.values.values())) != len(h.values):
        return Verdict.no(None, "phi is not injective on the upper approximation")
    return Verdict(True, reason=ISOMORPHISM_NOTE)


__all__ = ["RoughHom", "HomVerdict", "check_rough_hom", "identity_and_inverse_preserved",
           "kernel", "KernelReport", "transport_subgroup", "Transport", "openness",
           "OpennessReport", "is_rough_isomorphism", "restricted_map", "ISOMORPHISM_NOTE"]
