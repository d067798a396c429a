"""Boolean predicate language over structure atoms.

Grammar::

    expr   := term ('|' term)*
    term   := factor ('&' factor)*
    factor := '!' factor | '(' expr ')' | atom

Atoms are evaluated lazily and ``&``/``|`` operands are tried cheapest
first.  :func:`partial_eval` gives a three-valued answer from the algebraic
atoms alone, which lets the search skip every topology of a hopeless
``(partition, G)`` pair.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import PredicateSyntaxError, UnknownAtom


def _t(v) -> bool:
    return bool(v)


# name -> (evaluator, cost, algebraic)
# Algebraic atoms depend on (space, op, G) only.
ATOMS: dict[str, tuple[Callable, int, bool]] = {
    "rough_group": (lambda s: s.is_rough_group, 1, True),
    "e_in_g": (lambda s: s.e_in_g, 1, True),
    "g_open_in_upper": (lambda s: s.g_open, 2, False),
    "t0": (lambda s: _t(s.sep.T0), 3, False),
    "t1": (lambda s: _t(s.sep.T1), 3, False),
    "t2": (lambda s: _t(s.sep.T2), 3, False),
    "t3": (lambda s: _t(s.sep.T3), 4, False),
    "discrete": (lambda s: s.tauG.is_discrete(), 2, False),
    "upper_t0": (lambda s: _t(s.upper_sep.T0), 3, False),
    "upper_t1": (lambda s: _t(s.upper_sep.T1), 3, False),
    "connected": (lambda s: len(s.components) == 1, 4, False),
    "extremally_disconnected": (lambda s: _t(s.extremally_disconnected), 5, False),
    "trg": (lambda s: s.is_trg, 6, False),
    "topological_group": (lambda s: s.is_topological_group, 6, False),
    "strongly": (lambda s: _t(s.strongly), 8, False),
    "homogeneous": (lambda s: _t(s.homogeneous), 9, False),
}

# atoms that are false whenever G is not a rough group
NEEDS_ROUGH_GROUP = {"trg", "strongly", "topological_group", "e_in_g"}


def evaluate_atom(name: str, s) -> bool:
    try:
        fn = ATOMS[name][0]
    except KeyError:
        raise UnknownAtom(name) from None
    return bool(fn(s))


@dataclass(frozen=True)
class Atom:
    name: str

    def atoms(self):
        return {self.name}


@dataclass(frozen=True)
class Not:
    arg: "Expr"

    def atoms(self):
        return self.arg.atoms()


@dataclass(frozen=True)
class And:
    args: tuple

    def atoms(self):
        return set().union(*(a.atoms() for a in self.args))


@dataclass(frozen=True)
class Or:
    args: tuple

    def atoms(self):
        return set().union(*(a.atoms() for a in self.args))


Expr = Atom | Not | And | Or

_TOKEN = re.compile(r"\s*(?:(?P<op>[&|!()])|(?P<name>[A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PredicateSyntaxError(f"unexpected character {text[col]!r}", col)
        kind = "op" if m.group("op") else "name"
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expr(self):
        args = [self.term()]
        while self.peek()[1] == "|" and self.peek()[0] == "op":
            self.take()
            args.append(self.term())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def term(self):
        args = [self.factor()]
        while self.peek()[1] == "&" and self.peek()[0] == "op":
            self.take()
            args.append(self.factor())
        return args[0] if len(args) == 1 else And(tuple(args))

    def factor(self):
        kind, val, pos = self.take()
        if kind == "op" and val == "!":
            return Not(self.factor())
        if kind == "op" and val == "(":
            inner = self.expr()
            kind2, val2, pos2 = self.take()
            if val2 != ")":
                raise PredicateSyntaxError("unclosed parenthesis", pos)
            return inner
        if kind == "name":
            if val not in ATOMS:
                raise UnknownAtom(val, pos)
            return Atom(val)
        if kind == "end":
            raise PredicateSyntaxError("unexpected end of expression", pos)
        raise PredicateSyntaxError(f"unexpected {val!r}", pos)


def parse_predicate(text: str) -> Expr:
    p = _Parser(text)
    tree = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise PredicateSyntaxError(f"unexpected {val!r}", pos)
    return tree


def cost(expr: Expr) -> int:
    if isinstance(expr, Atom):
        return ATOMS[expr.name][1]
    if isinstance(expr, Not):
        return cost(expr.arg)
    return sum(cost(a) for a in expr.args)


def optimize(expr: Expr) -> Expr:
    """Reorder ``&``/``|`` operands by estimated cost."""
    if isinstance(expr, Atom):
        return expr
    if isinstance(expr, Not):
        return Not(optimize(expr.arg))
    args = sorted((optimize(a) for a in expr.args), key=cost)
    return type(expr)(tuple(args))


def evaluate(expr: Expr, s, lookup: Callable[[str, object], bool] = evaluate_atom) -> bool:
    if isinstance(expr, Atom):
        return lookup(expr.name, s)
    if isinstance(expr, Not):
        return not evaluate(expr.arg, s, lookup)
    if isinstance(expr, And):
        return all(evaluate(a, s, lookup) for a in expr.args)
    return any(evaluate(a, s, lookup) for a in expr.args)


def evaluate_full(expr: Expr, s) -> bool:
    """Evaluate every atom first, with no short-circuiting (audit path)."""
    values = {name: evaluate_atom(name, s) for name in sorted(expr.atoms())}

    def ev(e):
        if isinstance(e, Atom):
            return values[e.name]
        if isinstance(e, Not):
            return not ev(e.arg)
        results = [ev(a) for a in e.args]
        return all(results) if isinstance(e, And) else any(results)

    return ev(expr)


def partial_eval(expr: Expr, group) -> bool | None:
    """Three-valued evaluation from the algebraic part ``group`` only.

    Returns True/False when the topology cannot change the answer, else None.
    """
    rg = group.is_rough_group

    def ev(e):
        if isinstance(e, Atom):
            if e.name == "rough_group":
                return rg
            if e.name == "e_in_g":
                return group.e_in_g
            if e.name in NEEDS_ROUGH_GROUP and not rg:
                return False
            if e.name == "topological_group" and not group.closed_under_op:
                return False
            return None
        if isinstance(e, Not):
            v = ev(e.arg)
            return None if v is None else not v
        vals = [ev(a) for a in e.args]
        if isinstance(e, And):
            if any(v is False for v in vals):
                return False
            return True if all(v is True for v in vals) else None
        if any(v is True for v in vals):
            return True
        return False if all(v is False for v in vals) else None

    return ev(expr)
