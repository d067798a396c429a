import json

import pytest

from roughtop.catalogue import ENTRIES, build_example, executable_entries, reproduce, reproduce_all
from roughtop.enumeration import digest
from roughtop.errors import InfiniteEntry, RoughTopError, StructureFileError
from roughtop.structfile import dumps, from_dict, load, loads, to_dict


class TestCatalogue:
    @pytest.mark.parametrize("eid", ["ex2.9", "ex3.1", "ex3.4"])
    def test_reproduces(self, eid):
        rep = reproduce(eid)
        assert rep.executable and rep.ok, rep.mismatches

    def test_infinite_entries(self):
        for eid in ("ex3.9", "ex3.12", "ex4.3", "ex5.4"):
            assert not ENTRIES[eid].executable
            assert "infinite" in ENTRIES[eid].notes
            with pytest.raises(InfiniteEntry):
                build_example(eid)

    def test_unknown(self):
        with pytest.raises(RoughTopError):
            reproduce_all("ex9.9")

    def test_ex31_expectations(self):
        obs = reproduce("ex3.1").observed
        assert obs == {"rough_group": True, "trg": True, "strongly": False, "t0": True,
                       "t1": False, "upper_t0": False, "e_in_g": False, "homogeneous": False}

    def test_section_five_fixture(self):
        obs = reproduce("ex3.4").observed
        assert obs["upper_H1_meet_upper_H2"] == ["1", "2", "5"]
        assert obs["H1_meet_H2"] == []


class TestStructureFiles:
    @pytest.mark.parametrize("eid", ["ex2.9", "ex3.1", "ex3.4"])
    def test_round_trip(self, eid):
        s = build_example(eid)
        text = dumps(s)
        again = loads(text)
        assert dumps(again) == text
        assert digest(again) == digest(s)
        assert json.loads(text) == to_dict(s)

    def test_open_sets_payload(self):
        doc = {"universe": {"size": 6}, "op": {"kind": "zn_add", "k": 6},
               "partition": [[0, 1, 2], [3, 4, 5]], "subset": [2, 3, 4],
               "topology": {"kind": "open_sets",
                            "sets": [[], [2], [4], [2, 4], [2, 3, 4], [0, 1, 2, 3, 4, 5]]}}
        assert digest(from_dict(doc)) == digest(build_example("ex3.1"))

    def test_table_payload(self, tmp_path):
        s = build_example("ex2.9")
        doc = to_dict(s)
        doc["op"] = {"kind": "table", "table": [list(r) for r in s.op.table]}
        p = tmp_path / "t.json"
        p.write_text(json.dumps(doc))
        assert load(p).op.table == s.op.table

    @pytest.mark.parametrize("text,where", [
        ('{"universe": {"size": 2}', "1:25"),
        ('{"universe": {"size": 2}, "op": {"kind": "zn_add", "k": 3}, "partition": [[0, 1]],'
         ' "subset": [0], "topology": {"kind": "discrete"}}', "$.op"),
        ('{"universe": {"size": 2}, "op": {"kind": "zn_add", "k": 2}, "partition": [[0, 5]],'
         ' "subset": [0], "topology": {"kind": "discrete"}}', "$.partition[0][1]"),
        ('{"universe": {"size": 2}, "op": {"kind": "zn_add", "k": 2}, "partition": [[0, 1]],'
         ' "subset": [0], "topology": {"kind": "blob"}}', "$.topology.kind"),
        ('{"universe": {"size": 2}, "op": {"kind": "zn_add", "k": 2}, "partition": [[0], [1]],'
         ' "subset": [0], "topology": {"kind": "min_opens", "map": {"0": [0], "1": [1]}}}', "$.topology.map"),
    ])
    def test_positioned_errors(self, text, where):
        with pytest.raises(StructureFileError) as exc:
            loads(text)
        assert where in str(exc.value)

    def test_every_catalogue_entry_serialises(self):
        for eid in executable_entries():
            assert loads(dumps(build_example(eid)))
