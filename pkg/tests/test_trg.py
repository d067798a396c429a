import pytest

from roughtop.catalogue import build_example
from roughtop.core import ApproximationSpace, OpTable, Partition, Universe, bits, members
from roughtop.errors import CarrierMismatch, ElementNotInG, NotApplicable, NotTopologicalRoughGroup
from roughtop.fintop import Topology, continuity_failures, is_homeomorphism
from roughtop.streams import default_ops, structure_shards, structures_in_shard
from roughtop.trg import (RoughStructure, check_base_axioms, check_strongly, check_trg,
                          closure_via_translates, identity_core, inverse_map, special_sets,
                          translations, triple_domain, triple_map)


def all_structures(n_max):
    for shard in structure_shards(default_ops(n_max)):
        yield from structures_in_shard(shard)


@pytest.fixture(scope="module")
def small():
    return list(all_structures(3))


def discrete_group(n):
    sp = ApproximationSpace(Universe(n), Partition.discrete(n))
    G = (1 << n) - 1
    return RoughStructure(sp, OpTable.zn_add(n), G, Topology.discrete(G))


class TestTRG:
    def test_ex31(self, ex31):
        assert check_trg(ex31)

    def test_ex34(self, ex34):
        assert check_trg(ex34)

    def test_discrete_tau(self, small):
        for s in small:
            if s.tau.is_discrete():
                assert check_trg(s) and check_strongly(s)

    def test_carrier_must_be_upper(self, ex31):
        with pytest.raises(CarrierMismatch):
            RoughStructure(ex31.space, ex31.op, ex31.G, Topology.discrete(ex31.G))

    def test_bitset_path_matches_map_path(self, small):
        for s in small:
            assert bool(check_trg(s)) == bool(check_trg(s, via_maps=True))


class TestStrongly:
    def test_ex29(self, ex29):
        assert check_strongly(ex29)

    def test_ex31_fails_at_332(self, ex31):
        v = check_strongly(ex31)
        assert not v
        failing = {p for p, _ in continuity_failures(triple_map(ex31))}
        assert (3, 3, 2) in failing
        # the reported witness is the first failing triple in index order
        assert v.witness[0] == min(failing)

    def test_requires_trg(self):
        sp = ApproximationSpace(Universe(2), Partition.discrete(2))
        op = OpTable.zn_add(2)
        # Sierpinski topology on Z2: 1+1 = 0 but m(1) + m(1) reaches 1
        s = RoughStructure(sp, op, 0b11, Topology(0b11, {0: 0b01, 1: 0b11}))
        assert not s.is_trg
        with pytest.raises(NotTopologicalRoughGroup):
            check_strongly(s)

    def test_triple_domain_reading(self, ex31):
        dom = triple_domain(ex31)
        t = ex31.op.table
        assert all(ex31.upper >> t[t[x][y]][z] & 1 for x, y, z in dom)
        assert len(dom) == 27

    def test_strongly_implies_trg(self, small):
        for s in small:
            if s.is_trg and s.strongly:
                assert s.is_trg


class TestAlgebraicCorollaries:
    def test_trg_with_closed_g_is_group(self, small):
        for s in small:
            if s.is_trg and s.op.prod(s.G, s.G) & ~s.G == 0:
                assert s.group.is_group

    def test_inverse_homeomorphism(self, small):
        for s in small:
            if s.is_trg:
                f = inverse_map(s)
                assert all(f(f(x)) == x for x in members(s.G)) or not s.cert.unique_inverses
                assert is_homeomorphism(f)

    def test_open_identity_makes_g_discrete(self, small):
        for s in small:
            if s.is_trg and s.e_open_in_upper:
                assert s.tauG.is_discrete()


class TestBaseAxioms:
    def test_ex34_t6(self, ex34):
        b = check_base_axioms(ex34)
        assert b.t6_i and b.t6_ii

    def test_ex29_t5_not_applicable(self, ex29):
        b = check_base_axioms(ex29)
        assert all(not v.applicable for v in b.t5)

    def test_discrete_group_all_true(self):
        b = check_base_axioms(discrete_group(4))
        assert all(b.as_dict().values())


class TestTranslations:
    def test_ex31_left_3(self, ex31):
        assert translations(ex31, 3).left

    def test_identity_translation(self, ex34):
        tr = translations(ex34, ex34.e)
        assert tr.left and tr.right

    def test_ex34_right_2(self, ex34, lab34):
        two = members(lab34([2]))[0]
        assert translations(ex34, two).right

    def test_outside_g(self, ex31):
        with pytest.raises(ElementNotInG):
            translations(ex31, 0)


class TestClosureViaTranslates:
    def test_ex34_counterexample(self, ex34, lab34):
        c = closure_via_translates(ex34, lab34([2, 6]))
        assert c.lhs == lab34([2, 5, 6, 9]) and c.rhs == lab34([2, 6]) and not c.equal

    def test_empty(self, ex34):
        c = closure_via_translates(ex34, 0)
        assert c.lhs == c.rhs == 0

    def test_discrete_group(self):
        s = discrete_group(4)
        for A in range(1 << 4):
            assert closure_via_translates(s, A).equal


class TestIdentityCore:
    def test_ex34(self, ex34, lab34):
        core = identity_core(ex34)
        assert core.H == lab34([1]) and core.is_group

    def test_discrete(self):
        s = discrete_group(3)
        core = identity_core(s)
        assert core.H == 1 << s.e and core.is_group

    def test_needs_e_in_g(self, ex31):
        with pytest.raises(NotApplicable):
            identity_core(ex31)

    def test_core_not_a_group_when_g_not_open(self, small):
        # the hypothesis "G open" matters: some TRG with e in G has a core that is no group
        found = [s for s in all_structures(4)
                 if s.is_trg and s.e_in_g and not s.g_open and not identity_core(s).is_group]
        assert found
        assert all(not s.g_open for s in found)


class TestSpecialSets:
    def test_ex31_order_two(self, ex31):
        sets = special_sets(ex31, 3)
        assert sets.order2_set.members == bits([3])
        assert sets.square_roots_of_g.members == 0

    def test_abelian_commutant(self, ex31):
        for g in members(ex31.G):
            assert special_sets(ex31, g).commutant_of_g.members == ex31.G

    def test_identity_in_its_commutant(self, ex34):
        assert special_sets(ex34, ex34.e).commutant_of_g.members >> ex34.e & 1
