"""``roughtop`` command line: check, search, enumerate, theorems, reproduce.

Exit codes: 0 when everything met expectations, 1 for verdict-level
findings (mismatches, violations, exhausted budgets), 2 for usage and
parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalogue, enumeration, predicate, search as search_mod, structfile, theorems
from .core import Verdict
from .errors import BudgetExhausted, GeneratorExhausted, RoughTopError, UnknownAtom

SCHEMA_VERSION = 1

# atoms whose checker returns a Verdict with a witness
_VERDICTS = {
    "t0": lambda s: s.sep.T0,
    "t1": lambda s: s.sep.T1,
    "t2": lambda s: s.sep.T2,
    "t3": lambda s: s.sep.T3,
    "upper_t0": lambda s: s.upper_sep.T0,
    "upper_t1": lambda s: s.upper_sep.T1,
    "trg": lambda s: s.trg,
    "strongly": lambda s: s.strongly,
    "extremally_disconnected": lambda s: s.extremally_disconnected,
    "homogeneous": lambda s: s.homogeneous,
}


class UsageError(Exception):
    pass


def _out(text: str = ""):
    sys.stdout.write(text + "\n")


def _emit_json(doc: dict):
    _out(json.dumps({"schema_version": SCHEMA_VERSION, **doc}, indent=2, sort_keys=False))


def _mark(v: bool) -> str:
    return "yes" if v else "no"


def _jsonable(x):
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (int, str, float, bool)) or x is None:
        return x
    return repr(x)


def _load_structure(ref: str):
    if ref in catalogue.ENTRIES:
        return catalogue.build_example(ref)
    if not Path(ref).exists():
        raise UsageError(f"{ref}: no such file or catalogue entry")
    return structfile.load(ref)


def atom_report(s, name: str) -> dict:
    value = predicate.evaluate_atom(name, s)
    row = {"value": value}
    fn = _VERDICTS.get(name)
    if fn is not None and not value:
        v: Verdict = fn(s)
        if v.witness is not None:
            row["witness"] = _jsonable(v.witness)
        if v.reason:
            row["reason"] = v.reason
    return row


# --- subcommands ------------------------------------------------------------

def cmd_check(args) -> int:
    s = _load_structure(args.structure)
    if args.atoms:
        names = [a.strip() for a in args.atoms.split(",") if a.strip()]
        for a in names:
            if a not in predicate.ATOMS:
                raise UnknownAtom(a)
    elif args.where:
        names = sorted(predicate.parse_predicate(args.where).atoms())
    else:
        names = list(predicate.ATOMS)
    rows = {a: atom_report(s, a) for a in names}
    where = None
    if args.where:
        where = predicate.evaluate(predicate.parse_predicate(args.where), s)
    if args.json:
        doc = {"command": "check", "structure": args.structure, "n": s.n,
               "digest": enumeration.digest(s), "atoms": rows}
        if where is not None:
            doc["where"] = {"expr": args.where, "value": where}
        _emit_json(doc)
    else:
        _out(f"{args.structure}  n={s.n}  digest={enumeration.digest(s)}")
        for a, row in rows.items():
            line = f"  {a:<24} {_mark(row['value'])}"
            if "witness" in row:
                line += f"  witness={row['witness']}"
            _out(line)
        if where is not None:
            _out(f"  where {args.where!r}: {_mark(where)}")
    return 0 if where in (None, True) else 1


def cmd_search(args) -> int:
    spec = search_mod.SearchSpec(args.op, search_mod.parse_range(args.n), args.where,
                                 args.mode, args.budget, args.seconds)
    workers = theorems.worker_count()
    exhausted = False
    try:
        result = search_mod.search(spec, workers=workers)
    except BudgetExhausted as exc:
        result, exhausted = exc.partial, True
    paths = search_mod.write_witnesses(result, args.out) if args.out and result.witnesses else []
    if args.json:
        doc = {"command": "search", "op": args.op, "n": list(spec.n), "where": args.where,
               "mode": args.mode, "found": result.found, "count": result.count,
               "exhausted": exhausted, "witnesses": result.digests(),
               "files": [str(p) for p in paths], "stats": result.stats.as_dict(timing=not args.no_timing)}
        if args.mode == "count":
            doc.pop("witnesses")
        _emit_json(doc)
    else:
        st = result.stats
        _out(f"search {args.where!r} over {args.op} n={args.n} mode={args.mode}")
        _out(f"  nodes={st.nodes} pruned={st.pruned} audited={st.audited} "
             f"audit_mismatches={st.audit_mismatches}"
             + ("" if args.no_timing else f" seconds={st.seconds:.2f}"))
        if exhausted:
            _out("  budget exhausted before the search completed")
        if args.mode == "count":
            _out(f"  count={result.count}")
        elif result.found:
            for w in result.witnesses:
                _out(f"  witness n={w.n} digest={w.digest}")
        else:
            _out("  no witness")
        for p in paths:
            _out(f"  wrote {p}")
    if exhausted or result.stats.audit_mismatches:
        return 1
    return 0


def cmd_enumerate(args) -> int:
    if args.what == "partitions":
        count = sum(1 for _ in enumeration.enum_partitions(args.n))
    else:
        count = sum(1 for _ in enumeration.enum_topologies(args.n))
    if args.json:
        _emit_json({"command": "enumerate", "what": args.what, "n": args.n, "count": count})
    else:
        _out(str(count))
    return 0


def _selected_entries(only: str | None) -> list:
    if only is None:
        return list(theorems.REGISTRY.values())
    if only in theorems.REGISTRY or only in theorems.MUTATIONS:
        return [theorems.get_entry(only)]
    section = theorems.list_properties(only)
    if section:
        return section
    return [theorems.get_entry(only)]


def _meets(entry, report) -> bool:
    return report.ok if entry.expected == "holds" else not report.ok


def cmd_theorems(args) -> int:
    entries = _selected_entries(args.only)
    if args.generator == "sampled" or (args.seed is not None and args.generator is None):
        gen = theorems.GeneratorSpec("sampled", args.n_max, seed=args.seed or 0, samples=args.samples)
    else:
        gen = theorems.GeneratorSpec(args.generator or "exhaustive", args.n_max)
    try:
        reports = theorems.sweep(entries, gen)
        partial = False
    except GeneratorExhausted as exc:
        reports, partial = exc.partial, True
    verdicts = [(e, r, _meets(e, r)) for e, r in zip(entries, reports)]
    if args.json:
        rows = []
        for e, r, ok in verdicts:
            d = r.as_dict(timing=not args.no_timing)
            d.update({"expected": e.expected, "met": ok, "digests": sorted({v.digest for v in r.violations})})
            rows.append(d)
        _emit_json({"command": "theorems", "generator": gen.kind, "n_max": gen.n_max,
                    "seed": gen.seed if gen.kind == "sampled" else None,
                    "partial": partial, "properties": rows})
    else:
        for e, r, ok in verdicts:
            tag = "ok  " if ok else "FAIL"
            line = f"{tag} {e.id:<24} examined={r.examined} hits={r.hits} violations={len(r.violations)}"
            if e.expected != "holds":
                line += " (expected to fail)"
            _out(line)
            if r.violations and (not ok or args.verbose or e.expected != "holds"):
                v = r.violations[0]
                _out(f"       first: n={v.n} digest={v.digest} witness={_jsonable(v.witness)} {v.label}".rstrip())
        met = sum(ok for _, _, ok in verdicts)
        _out(f"{met}/{len(verdicts)} properties met expectations")
        if partial:
            _out("budget exhausted; counts are partial")
    return 0 if all(ok for _, _, ok in verdicts) and not partial else 1


def cmd_reproduce(args) -> int:
    reports = catalogue.reproduce_all(args.only)
    if args.json:
        _emit_json({"command": "reproduce", "entries": [
            {"id": r.id, "executable": r.executable, "ok": r.ok,
             "observed": _jsonable(r.observed), "expected": _jsonable(r.expected),
             "mismatches": r.mismatches, "notes": r.notes}
            for r in reports]})
    else:
        for r in reports:
            if not r.executable:
                _out(f"skip {r.id:<8} {r.notes}")
                continue
            _out(f"{'ok  ' if r.ok else 'FAIL'} {r.id:<8} ({r.seconds * 1000:.1f} ms)")
            for k, want in r.expected.items():
                got = r.observed.get(k)
                flag = "" if got == want else f"   expected {want}"
                shown = _mark(got) if isinstance(got, bool) else got
                _out(f"       {k:<26} {shown}{flag}")
    return 0 if all(r.ok for r in reports) else 1


# --- parser -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="roughtop", description="Finite rough groups and topological rough groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="evaluate atoms on a structure file or catalogue id")
    c.add_argument("structure", help="structure file or catalogue id such as ex3.1")
    c.add_argument("--atoms", help="comma separated atom names (default: all)")
    c.add_argument("--where", help="also evaluate a predicate; exit 1 if it is false")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("search", help="search for structures satisfying a predicate")
    s.add_argument("--op", required=True, help="zn_add:K, mod_mul:P, table:PATH, or a bare family")
    s.add_argument("--n", required=True, help="size or range, e.g. 6 or 1-5")
    s.add_argument("--where", required=True, help="predicate, e.g. 'trg & t0 & !t1'")
    s.add_argument("--mode", choices=search_mod.MODES, default="first")
    s.add_argument("--budget", type=int, default=search_mod.DEFAULT_BUDGET, help="node budget")
    s.add_argument("--seconds", type=float, default=search_mod.DEFAULT_SECONDS, help="time budget")
    s.add_argument("--out", help="directory for witness files")
    s.add_argument("--json", action="store_true")
    s.add_argument("--no-timing", action="store_true", help="omit timings from reports")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("enumerate", help="count partitions or topologies")
    e.add_argument("--what", choices=("partitions", "topologies"), required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_enumerate)

    t = sub.add_parser("theorems", help="sweep registered properties")
    t.add_argument("--only", help="property id, mutation id or section number")
    t.add_argument("--n-max", type=int, default=4)
    t.add_argument("--generator", choices=("exhaustive", "catalogue", "sampled"))
    t.add_argument("--seed", type=int, help="seed for sampled structures (implies sampled)")
    t.add_argument("--samples", type=int, default=2000)
    t.add_argument("--json", action="store_true")
    t.add_argument("--no-timing", action="store_true", help="omit timings from reports")
    t.add_argument("-v", "--verbose", action="store_true", help="show first violation of every entry")
    t.set_defaults(func=cmd_theorems)

    r = sub.add_parser("reproduce", help="reproduce the worked examples")
    r.add_argument("--only", help="catalogue id such as ex3.1")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, RoughTopError) as exc:
        # parse errors, unknown atoms, bad files and caps all land here
        sys.stderr.write(f"roughtop: {exc}\n")
        return 2

if __name__ == "__main__":
    sys.exit(main())
