import pytest

from roughtop.errors import PredicateSyntaxError, UnknownAtom
from roughtop.predicate import (ATOMS, And, Atom, Not, Or, evaluate, evaluate_full, optimize,
                                parse_predicate, partial_eval)
from roughtop.core import ApproximationSpace, RoughGroup
from roughtop.enumeration import topologies_on
from roughtop.streams import (_op, _partitions, default_ops, structure_shards, structures_in_shard,
                              universe_for)
from roughtop.trg import RoughStructure


class TestParser:
    def test_three_atoms(self):
        e = parse_predicate("trg & t0 & !t1")
        assert e == And((Atom("trg"), Atom("t0"), Not(Atom("t1"))))
        assert e.atoms() == {"trg", "t0", "t1"}

    def test_unclosed_paren(self):
        with pytest.raises(PredicateSyntaxError) as exc:
            parse_predicate("trg & (t1 | !t2")
        assert exc.value.position == 6

    def test_unknown_atom(self):
        with pytest.raises(UnknownAtom) as exc:
            parse_predicate("trg & warmth")
        assert exc.value.name == "warmth"

    def test_precedence(self):
        assert parse_predicate("!t0 & t1 | t2") == Or((And((Not(Atom("t0")), Atom("t1"))), Atom("t2")))
        assert parse_predicate("t0 & (t1 | t2)") == And((Atom("t0"), Or((Atom("t1"), Atom("t2")))))

    @pytest.mark.parametrize("text", ["", "trg &", "& trg", "trg t0", "(trg", "trg)", "t0 # t1"])
    def test_malformed(self, text):
        with pytest.raises(PredicateSyntaxError):
            parse_predicate(text)

    def test_every_atom_parses(self):
        for name in ATOMS:
            assert parse_predicate(name) == Atom(name)


def test_optimize_orders_cheap_first():
    e = optimize(parse_predicate("trg & e_in_g"))
    assert e.args[0] == Atom("e_in_g")


def every_structure(n_max):
    for shard in structure_shards(default_ops(n_max)):
        yield from structures_in_shard(shard)


EXPRS = ["trg & t0 & !t1", "strongly | !connected", "!(t1 | homogeneous) & e_in_g",
         "topological_group | extremally_disconnected & upper_t1", "discrete & !t2",
         "g_open_in_upper & !rough_group", "t3 | upper_t0"]


def test_short_circuit_matches_full():
    parsed = [optimize(parse_predicate(x)) for x in EXPRS]
    for s in every_structure(3):
        for e in parsed:
            assert evaluate(e, s) == evaluate_full(e, s)


def test_partial_eval_is_sound():
    parsed = [optimize(parse_predicate(x)) for x in EXPRS + ["rough_group & trg", "!rough_group"]]
    for name in ("zn_add:3", "zn_add:4"):
        op = _op(name)
        for part in _partitions(op.size):
            sp = ApproximationSpace(universe_for(op), part)
            for G in range(1, 1 << op.size):
                grp = RoughGroup(sp, op, G)
                for e in parsed:
                    pre = partial_eval(e, grp)
                    if pre is None:
                        continue
                    for tau in topologies_on(grp.upper):
                        assert evaluate(e, RoughStructure(sp, op, G, tau, group=grp)) == pre
