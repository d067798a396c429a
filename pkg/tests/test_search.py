import random

import pytest

from roughtop.errors import BudgetExhausted, CapExceeded, RoughTopError
from roughtop.predicate import evaluate, parse_predicate
from roughtop.search import (SearchSpec, _search_shard, expand_ops, parse_range, search,
                             write_witnesses)
from roughtop.streams import _op, _partitions
from roughtop.structfile import load


class TestSpec:
    @pytest.mark.parametrize("text,rng", [("6", (6, 6)), ("2-5", (2, 5)), ("2..5", (2, 5)), (" 3 ", (3, 3))])
    def test_ranges(self, text, rng):
        assert parse_range(text) == rng

    @pytest.mark.parametrize("text", ["", "5-2", "0", "a-b", "1-"])
    def test_bad_ranges(self, text):
        with pytest.raises(RoughTopError):
            parse_range(text)

    def test_families(self):
        assert expand_ops("zn_add", 2, 4) == ["zn_add:2", "zn_add:3", "zn_add:4"]
        assert expand_ops("mod_mul", 1, 6) == ["mod_mul:2", "mod_mul:3", "mod_mul:5", "mod_mul:7"]
        assert expand_ops("zn_add:5", 1, 6) == ["zn_add:5"]
        with pytest.raises(RoughTopError):
            expand_ops("zn_add:5", 1, 4)

    def test_caps(self):
        with pytest.raises(CapExceeded):
            SearchSpec("zn_add", (1, 8), "trg")

    def test_mode(self):
        with pytest.raises(RoughTopError):
            SearchSpec("zn_add", (1, 3), "trg", mode="some")


def test_t1_without_t0_is_unsat():
    r = search(SearchSpec("zn_add", (1, 4), "t1 & !t0", "count"))
    assert r.count == 0 and r.stats.nodes > 0


def test_first_witness_satisfies_predicate(tmp_path):
    where = "trg & !t0 & e_in_g"
    r = search(SearchSpec("zn_add", (1, 3), where, "first"), out_dir=tmp_path)
    assert r.count == 1 and len(r.witnesses) == 1
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    assert evaluate(parse_predicate(where), load(files[0]))


def test_all_witnesses_satisfy_predicate(tmp_path):
    where = "trg & !t0 & !connected"
    r = search(SearchSpec("zn_add", (1, 4), where, "all"))
    assert r.witnesses
    expr = parse_predicate(where)
    for w in r.witnesses:
        assert evaluate(expr, w.structure())
    paths = write_witnesses(r, tmp_path)
    assert {p.name for p in paths} == {f"witness-n{w.n}-{w.digest}.json" for w in r.witnesses}


def test_shard_order_does_not_change_witness_set():
    spec = SearchSpec("zn_add", (1, 4), "trg & !t1 & e_in_g", "all")
    expected = set(search(spec).digests())
    jobs = [(o, pi, spec.where, "all", spec.budget, float("inf"), 0.0)
            for o in spec.ops() for pi in range(len(_partitions(_op(o).size)))]
    random.Random(3).shuffle(jobs)
    got = set()
    for j in jobs:
        wits, _, _ = _search_shard(j)
        got |= {d for _, d, _ in wits}
    assert got == expected and expected


def test_workers_agree():
    spec = SearchSpec("zn_add", (1, 4), "trg & t0 & !t1 | strongly & !t2", "all")
    assert search(spec, workers=1).digests() == search(spec, workers=3).digests()


def test_full_audit_finds_no_mismatch():
    r = search(SearchSpec("zn_add", (1, 3), "strongly | connected & !t0", "all", audit_rate=1.0))
    assert r.stats.audited == r.stats.nodes and r.stats.audit_mismatches == 0


def test_budget_exhausted():
    with pytest.raises(BudgetExhausted) as exc:
        search(SearchSpec("zn_add", (1, 4), "t1 & !t0", "all", budget=50))
    assert exc.value.partial.stats.nodes == 50


def test_pruning_skips_non_groups():
    r = search(SearchSpec("zn_add:4", (4, 4), "trg", "count"))
    assert r.stats.pruned > 0
