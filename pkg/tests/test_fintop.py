import itertools

import pytest
from hypothesis import given, settings, strategies as st

from roughtop.core import bits, members
from roughtop.enumeration import enum_topologies
from roughtop.errors import CarrierMismatch, MissingEmptyOrCarrier, NotClosedUnderIntersection
from roughtop.fintop import (MapTable, ProductSpace, Topology, closure_interior, components,
                             components_oracle, continuity_failures, fixed_point_set,
                             is_continuous, is_extremally_disconnected, is_homeomorphism,
                             is_homogeneous, is_open_map, is_regular, is_regular_oracle,
                             self_homeomorphisms, separation_flags, subspace,
                             topology_from_base, topology_from_open_sets)

from oracles import lattice_closure, lattice_interior, open_families, preimage_continuous

U6 = bits(range(6))


def ex31_tau():
    return topology_from_open_sets(U6, [0, U6, bits([2]), bits([4]), bits([2, 4]), bits([2, 3, 4])])


class TestConstruction:
    def test_ex31_minimal_opens(self):
        t = ex31_tau()
        assert t.mo[2] == bits([2]) and t.mo[4] == bits([4])
        assert t.mo[3] == bits([2, 3, 4])
        assert t.mo[0] == t.mo[1] == t.mo[5] == U6

    def test_discrete_family(self):
        t = topology_from_open_sets(0b11, [0, 0b01, 0b10, 0b11])
        assert t.mo == {0: 0b01, 1: 0b10}

    def test_intersection_missing(self):
        with pytest.raises(NotClosedUnderIntersection) as exc:
            topology_from_open_sets(0b111, [0, 0b111, 0b011, 0b110])
        assert exc.value.witness[2] == (1,)

    def test_missing_carrier(self):
        with pytest.raises(MissingEmptyOrCarrier):
            topology_from_open_sets(0b11, [0, 0b01])

    def test_round_trip_all_families(self):
        for n in range(1, 4):
            for fam in open_families(n):
                t = topology_from_open_sets((1 << n) - 1, fam)
                assert set(t.opens()) == set(fam)

    def test_alexandrov_law_after_base(self, ex34):
        t = ex34.tau
        for x in t.points():
            for y in members(t.mo[x]):
                assert t.mo[y] & ~t.mo[x] == 0


class TestClosureInterior:
    def test_ex31_closure_of_4(self):
        t = ex31_tau()
        fam = list(t.opens())
        c = t.closure(bits([4]))
        # 0 and 1 belong too: their only neighbourhood is the whole carrier
        assert c == lattice_closure(fam, U6, bits([4])) == bits([0, 1, 3, 4, 5])
        assert c & bits([3, 5]) == bits([3, 5]) and not t.is_closed(bits([4]))

    def test_carrier(self):
        t = ex31_tau()
        assert closure_interior(t, U6) == (U6, U6)

    def test_ex34_closure_in_g(self, ex34, lab34):
        assert ex34.tauG.closure(lab34([2])) == lab34([2, 5])

    def test_lattice_definitions_exhaustive(self):
        # oracle: closure = meet of closed supersets, interior = join of open subsets
        for n in range(1, 5):
            carrier = (1 << n) - 1
            for fam in open_families(n):
                t = topology_from_open_sets(carrier, fam)
                for A in range(1 << n):
                    assert t.closure(A) == lattice_closure(fam, carrier, A)
                    assert t.interior(A) == lattice_interior(fam, A)

    def test_kuratowski_and_duality(self):
        for n in range(1, 5):
            carrier = (1 << n) - 1
            for t in enum_topologies(n):
                cl = [t.closure(A) for A in range(1 << n)]
                assert cl[0] == 0
                for A in range(1 << n):
                    assert A & ~cl[A] == 0
                    assert cl[cl[A]] == cl[A]
                    assert t.interior(A) == carrier & ~cl[carrier & ~A]
                for A, B in itertools.combinations(range(1 << n), 2):
                    assert cl[A | B] == cl[A] | cl[B]


class TestSubspace:
    def test_ex31_trace(self):
        sub = subspace(ex31_tau(), bits([2, 3, 4]))
        assert set(sub.opens()) == {0, bits([2]), bits([4]), bits([2, 4]), bits([2, 3, 4])}

    def test_whole_carrier(self):
        t = ex31_tau()
        assert subspace(t, U6) == t

    def test_ex34_base(self, ex34, lab34):
        mins = {ex34.tauG.mo[x] for x in ex34.tauG.points()}
        assert mins == {lab34(b) for b in ([1], [2], [6], [2, 5], [6, 9])}

    def test_outside_carrier(self):
        with pytest.raises(CarrierMismatch):
            subspace(Topology.discrete(0b011), 0b100)

    def test_transitivity_exhaustive(self):
        for n in range(1, 5):
            for t in enum_topologies(n):
                for A in range(1, 1 << n):
                    sa = subspace(t, A)
                    for B in range(1, 1 << n):
                        if B & ~A == 0:
                            assert subspace(sa, B) == subspace(t, B)


class TestSeparation:
    def test_ex31_g(self, ex31):
        f = separation_flags(ex31.tauG)
        assert f.T0 and not f.T1

    def test_ex31_upper_not_t0(self):
        f = separation_flags(ex31_tau())
        assert not f.T0 and f.T0.witness == (0, 1)

    def test_discrete_all_true(self):
        f = separation_flags(Topology.discrete(0b1111))
        assert all(f.as_dict().values())

    def test_finite_t1_iff_discrete_iff_t2(self):
        for n in range(1, 5):
            for t in enum_topologies(n):
                f = separation_flags(t)
                assert bool(f.T1) == t.is_discrete() == bool(f.T2)
                if f.T2:
                    assert f.T1
                if f.T1:
                    assert f.T0
                assert bool(f.T3half) == bool(f.T3)

    def test_regular_matches_oracle(self):
        for n in range(1, 5):
            for t in enum_topologies(n):
                assert bool(is_regular(t)) == is_regular_oracle(t)


class TestExtremalDisconnectedness:
    def test_discrete_and_indiscrete(self):
        assert is_extremally_disconnected(Topology.discrete(0b111))
        assert is_extremally_disconnected(Topology.indiscrete(0b111))

    def test_ex31_matches_oracle(self):
        t = ex31_tau()
        assert bool(is_extremally_disconnected(t)) == bool(is_extremally_disconnected(t, oracle=True))

    def test_minimal_opens_suffice(self):
        for n in range(1, 5):
            for t in enum_topologies(n):
                assert bool(is_extremally_disconnected(t)) == bool(
                    is_extremally_disconnected(t, oracle=True))


class TestComponents:
    def test_discrete(self):
        assert components(Topology.discrete(0b1111)) == (1, 2, 4, 8)

    def test_indiscrete(self):
        assert components(Topology.indiscrete(0b111)) == (0b111,)

    def test_ex31_single(self):
        assert components(ex31_tau()) == (U6,)

    def test_matches_oracle(self):
        for n in range(1, 5):
            for t in enum_topologies(n):
                assert components(t) == components_oracle(t)


class TestMaps:
    def test_ex31_product_continuous(self, ex31):
        from roughtop.trg import product_map
        assert is_continuous(product_map(ex31))

    def test_identity(self):
        t = ex31_tau()
        f = MapTable(t, t, {x: x for x in t.points()})
        assert is_continuous(f) and is_open_map(f) and is_homeomorphism(f)
        assert fixed_point_set(f).points == frozenset(t.points())

    def test_ex31_triple_failures(self, ex31):
        from roughtop.trg import triple_map
        f = triple_map(ex31)
        at = [q for p, q in continuity_failures(f) if p == (3, 3, 2)]
        # (2, 3, 2) lies in m(3) x m(3) x m(2) and multiplies to 1, outside m(2) = {2}
        assert (2, 3, 2) in at and f((2, 3, 2)) == 1
        assert len(f.domain.points()) == 27

    def test_constant_map_not_open(self):
        dom = Topology.discrete(0b11)
        cod = Topology.indiscrete(0b11)
        f = MapTable(dom, cod, {0: 0, 1: 0})
        v = is_open_map(f)
        assert not v and v.witness is not None

    def test_swap_fixed_set(self):
        t = Topology.discrete(0b11)
        fp = fixed_point_set(MapTable(t, t, {0: 1, 1: 0}))
        assert fp.points == frozenset() and fp.clopen

    def test_ex31_inverse_homeomorphism(self, ex31):
        from roughtop.trg import inverse_map
        assert is_homeomorphism(inverse_map(ex31))

    def test_minimal_open_criterion_matches_oracle(self):
        # every map between every pair of topologies on at most 3 points
        checked = 0
        for n in range(1, 4):
            for m in range(1, 4):
                dfams, cfams = open_families(n), open_families(m)
                dom_tops = [topology_from_open_sets((1 << n) - 1, f) for f in dfams]
                cod_tops = [topology_from_open_sets((1 << m) - 1, f) for f in cfams]
                for vals in itertools.product(range(m), repeat=n):
                    values = dict(enumerate(vals))
                    for dt, df in zip(dom_tops, dfams):
                        for ct, cf in zip(cod_tops, cfams):
                            f = MapTable(dt, ct, values)
                            fast = bool(is_continuous(f))
                            assert fast == preimage_continuous(values, df, cf)
                            assert fast == bool(is_continuous(f, oracle=True))
                            checked += 1
        assert checked > 20000

    def test_open_map_matches_oracle(self):
        for n in range(1, 4):
            tops = list(enum_topologies(n))
            for vals in itertools.product(range(n), repeat=n):
                values = dict(enumerate(vals))
                for a in tops:
                    for b in tops:
                        f = MapTable(a, b, values)
                        assert bool(is_open_map(f)) == bool(is_open_map(f, oracle=True))

    def test_product_space_neighbourhoods(self):
        t = ex31_tau()
        p = ProductSpace((t, t))
        assert p.nbhd((2, 4)) == frozenset({(2, 4)})


class TestHomogeneity:
    def test_discrete(self):
        assert is_homogeneous(Topology.discrete(0b111))

    def test_indiscrete(self):
        assert is_homogeneous(Topology.indiscrete(0b111))

    def test_ex31_g(self, ex31):
        assert not is_homogeneous(ex31.tauG)

    def test_self_homeomorphisms_are_homeomorphisms(self):
        for t in enum_topologies(3):
            count = 0
            for h in self_homeomorphisms(t):
                assert is_homeomorphism(MapTable(t, t, h))
                count += 1
            brute = sum(1 for perm in itertools.permutations(t.points())
                        if is_homeomorphism(MapTable(t, t, dict(zip(t.points(), perm)))))
            assert count == brute


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(
    st.integers(1, (1 << n) - 1), max_size=6))))
def test_base_generates_a_topology(data):
    n, base = data
    carrier = (1 << n) - 1
    t = topology_from_base(carrier, base)
    opens = set(t.opens())
    assert 0 in opens and carrier in opens
    for B in base:
        assert B in opens
