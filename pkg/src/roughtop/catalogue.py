"""Worked examples as executable fixtures with their expected verdicts."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .core import ApproximationSpace, OpTable, Partition, Universe, bits, members
from .errors import InfiniteEntry, RoughTopError
from .fintop import Topology, topology_from_base, topology_from_open_sets
from .trg import RoughStructure


@dataclass(frozen=True)
class CatalogueEntry:
    id: str
    title: str
    build: Callable[[], RoughStructure] | None
    expected: dict = field(default_factory=dict)
    extras: Callable[[RoughStructure], dict] | None = None
    notes: str = ""

    @property
    def executable(self) -> bool:
        return self.build is not None


def _ex2_9() -> RoughStructure:
    op = OpTable.zn_add(3)
    space = ApproximationSpace(Universe(3), Partition(3, [[0, 1], [2]]))
    G = bits([1, 2])
    # the topology is left open in the source; the discrete one is used
    return RoughStructure(space, op, G, Topology.discrete(space.upper(G)))


def _ex3_1() -> RoughStructure:
    op = OpTable.zn_add(6)
    space = ApproximationSpace(Universe(6), Partition(6, [[0, 1, 2], [3, 4, 5]]))
    G = bits([2, 3, 4])
    U = space.upper(G)
    tau = topology_from_open_sets(U, [0, U, bits([2]), bits([4]), bits([2, 4]), bits([2, 3, 4])])
    return RoughStructure(space, op, G, tau)


def mod11_universe() -> Universe:
    return Universe(10, tuple(str(i) for i in range(1, 11)))


def _ex3_4() -> RoughStructure:
    op = OpTable.mod_mul(11)
    uni = mod11_universe()
    lab = uni.from_labels
    # third block printed with a repeated name; read as its own block
    blocks = [lab([1, 2, 5]), lab([3, 8, 9]), lab([4, 6, 7, 10])]
    space = ApproximationSpace(uni, Partition(10, blocks))
    G = lab([1, 2, 5, 6, 9])
    base = [lab(b) for b in ([1, 7, 8], [3, 4, 10], [2], [6], [2, 5], [6, 9])]
    tau = topology_from_base(space.upper(G), base)
    return RoughStructure(space, op, G, tau)


def _ex3_4_extras(s: RoughStructure) -> dict:
    uni = s.space.universe
    lab = uni.from_labels
    e = s.e
    H1, H2 = lab([2, 6]), lab([5, 9])
    up = s.space.upper
    return {
        "e_clopen_in_G": s.tauG.is_clopen(1 << e),
        "closure_of_2_in_G": uni.to_labels(s.tauG.closure(lab([2]))),
        "upper_H1_meet_upper_H2": uni.to_labels(up(H1) & up(H2)),
        "H1_meet_H2": uni.to_labels(H1 & H2),
    }


INFINITE_REASON = ("carrier is the integers; the verdicts quantify over infinitely many open "
                   "sets, so no finite check is sound without extra theory")

ENTRIES: dict[str, CatalogueEntry] = {
    e.id: e for e in [
        CatalogueEntry(
            "ex2.9", "strongly topological rough group that is not a topological group",
            _ex2_9,
            {"rough_group": True, "trg": True, "strongly": True, "topological_group": False,
             "e_in_g": False},
            notes="topology unspecified in the source; discrete topology on Z3 chosen"),
        CatalogueEntry(
            "ex3.1", "T0 topological rough group, e outside G, G not T1",
            _ex3_1,
            {"rough_group": True, "trg": True, "strongly": False, "t0": True, "t1": False,
             "upper_t0": False, "e_in_g": False, "homogeneous": False}),
        CatalogueEntry(
            "ex3.4", "T0 topological rough group with e in G, G not T1",
            _ex3_4,
            {"rough_group": True, "trg": True, "t0": True, "t1": False, "e_in_g": True},
            extras=_ex3_4_extras,
            notes="blocks {1,2,5}, {3,8,9}, {4,6,7,10}; third block name repeated in the source"),
        CatalogueEntry(
            "ex3.9", "T1 topological rough group on the integers, e outside G, not Hausdorff",
            None, notes="odd integers with cofinite-type neighbourhoods; " + INFINITE_REASON),
        CatalogueEntry(
            "ex3.12", "T1 topological rough group on the integers, e in G, not Hausdorff",
            None, notes="odd integers plus 0; " + INFINITE_REASON),
        CatalogueEntry(
            "ex4.3", "no symmetric identity neighbourhood with V^2 inside W when e is outside G",
            None, notes="integers mod-4 blocks, odd G; " + INFINITE_REASON),
        CatalogueEntry(
            "ex5.4", "closure of a rough subgroup inside G that is not a rough subgroup",
            None, notes="integers, H = {+-(8k+1)}; " + INFINITE_REASON),
    ]
}

EXPECTED_EXTRAS = {
    "ex3.4": {
        "e_clopen_in_G": True,
        "closure_of_2_in_G": ["2", "5"],
        "upper_H1_meet_upper_H2": ["1", "2", "5"],
        "H1_meet_H2": [],
    }
}


def build_example(id: str) -> RoughStructure:
    try:
        entry = ENTRIES[id]
    except KeyError:
        raise RoughTopError(f"unknown catalogue entry {id!r}") from None
    if not entry.executable:
        raise InfiniteEntry(f"{id} has an infinite carrier: {entry.notes}")
    return entry.build()


@dataclass
class EntryReport:
    id: str
    executable: bool
    observed: dict
    expected: dict
    mismatches: list
    seconds: float
    notes: str = ""

    @property
    def ok(self) -> bool:
        return not self.mismatches


def reproduce(id: str) -> EntryReport:
    from .predicate import evaluate_atom
    entry = ENTRIES[id]
    if not entry.executable:
        return EntryReport(id, False, {}, {}, [], 0.0, entry.notes)
    t0 = time.perf_counter()
    s = entry.build()
    observed = {atom: evaluate_atom(atom, s) for atom in entry.expected}
    expected = dict(entry.expected)
    if entry.extras is not None:
        observed.update(entry.extras(s))
        expected.update(EXPECTED_EXTRAS.get(id, {}))
    mismatches = [k for k in expected if observed.get(k) != expected[k]]
    return EntryReport(id, True, observed, expected, mismatches, time.perf_counter() - t0, entry.notes)


def reproduce_all(only: str | None = None) -> list[EntryReport]:
    ids = [only] if only else list(ENTRIES)
    for i in ids:
        if i not in ENTRIES:
            raise RoughTopError(f"unknown catalogue entry {i!r}")
    return [reproduce(i) for i in ids]


def executable_entries() -> list[str]:
    return [k for k, e in ENTRIES.items() if e.executable]


def describe(s: RoughStructure) -> str:
    uni = s.space.universe
    return (f"G={uni.to_labels(s.G)} upper={uni.to_labels(s.upper)} "
            f"blocks={[uni.to_labels(b) for b in s.space.partition.blocks]}")


__all__ = ["CatalogueEntry", "ENTRIES", "build_example", "reproduce", "reproduce_all",
           "executable_entries"]
