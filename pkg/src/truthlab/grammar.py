"""Concrete text syntax.

Canonical output::

    terms     0   S(t)   (t + t)   (t * t)   v<k>
    formulas  (t = t)   P(t)   ~f   (f | f)   E v<k> f

The parser also accepts the sugar ``(f & f)``, ``A v<k> f`` and ``(f -> f)``,
expanded on the spot, plus redundant grouping parentheses around a formula.
"""
from __future__ import annotations

import re

from .errors import ParseError
from .syntax import (
    Add,
    Eq,
    Exists,
    Formula,
    Mul,
    Not,
    Or,
    P,
    Succ,
    Term,
    Var,
    Zero,
    ZERO,
    and_,
    forall,
    implies,
)

_TOKEN = re.compile(r"\s*(?:(->)|(v\d+)|([0SPEA~|&()+*=]))")


def format_term(t: Term) -> str:
    succs = 0
    while isinstance(t, Succ):
        succs += 1
        t = t.arg
    if isinstance(t, Zero):
        core = "0"
    elif isinstance(t, Var):
        core = f"v{t.index}"
    elif isinstance(t, Add):
        core = f"({format_term(t.left)} + {format_term(t.right)})"
    else:
        core = f"({format_term(t.left)} * {format_term(t.right)})"
    return "S(" * succs + core + ")" * succs


def format_formula(phi: Formula) -> str:
    parts = []
    _fmt(phi, parts)
    return "".join(parts)


def _fmt(phi: Formula, out: list) -> None:
    while isinstance(phi, (Not, Exists)):
        if isinstance(phi, Not):
            out.append("~")
        else:
            out.append(f"E v{phi.var} ")
        phi = phi.body
    if isinstance(phi, Eq):
        out.append(f"({format_term(phi.left)} = {format_term(phi.right)})")
    elif isinstance(phi, P):
        out.append(f"P({format_term(phi.arg)})")
    else:
        out.append("(")
        _fmt(phi.left, out)
        out.append(" | ")
        _fmt(phi.right, out)
        out.append(")")


def unparse(x) -> str:
    return format_term(x) if isinstance(x, Term) else format_formula(x)


class _Parser:
    def __init__(self, text: str, line=None):
        self.text = text
        self.line = line
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            while text[pos].isspace():
                pos += 1
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character at column {pos + 1}: {text[pos]!r}", line, pos + 1)
            tok = m.group(1) or m.group(2) or m.group(3)
            self.tokens.append((tok, m.start(m.lastindex) + 1))
            pos = m.end()
        self.memo = {}

    def fail(self, i, what):
        if i < len(self.tokens):
            tok, col = self.tokens[i]
            return ParseError(f"expected {what} at column {col}, found {tok!r}", self.line, col)
        return ParseError(f"expected {what}, found end of input", self.line)

    def peek(self, i):
        return self.tokens[i][0] if i < len(self.tokens) else None

    def expect(self, i, tok):
        if self.peek(i) != tok:
            raise self.fail(i, repr(tok))
        return i + 1

    def var(self, i):
        tok = self.peek(i)
        if tok is None or not tok.startswith("v"):
            raise self.fail(i, "a variable")
        return int(tok[1:]), i + 1

    def term(self, i):
        key = ("t", i)
        if key not in self.memo:
            try:
                self.memo[key] = self._term(i)
            except ParseError as e:
                self.memo[key] = e
        res = self.memo[key]
        if isinstance(res, ParseError):
            raise res
        return res

    def _term(self, i):
        tok = self.peek(i)
        if tok == "0":
            return ZERO, i + 1
        if tok is not None and tok.startswith("v"):
            return Var(int(tok[1:])), i + 1
        if tok == "S":
            # iterate over runs of S( so long numerals do not recurse
            n = 0
            while self.peek(i) == "S":
                i = self.expect(i + 1, "(")
                n += 1
            t, i = self.term(i)
            for _ in range(n):
                i = self.expect(i, ")")
                t = Succ(t)
            return t, i
        if tok == "(":
            left, j = self.term(i + 1)
            op = self.peek(j)
            if op not in ("+", "*"):
                raise self.fail(j, "'+' or '*'")
            right, j = self.term(j + 1)
            j = self.expect(j, ")")
            return (Add if op == "+" else Mul)(left, right), j
        raise self.fail(i, "a term")

    def formula(self, i):
        key = ("f", i)
        if key not in self.memo:
            try:
                self.memo[key] = self._formula(i)
            except ParseError as e:
                self.memo[key] = e
        res = self.memo[key]
        if isinstance(res, ParseError):
            raise res
        return res

    def _formula(self, i):
        tok = self.peek(i)
        if tok == "~":
            body, j = self.formula(i + 1)
            return Not(body), j
        if tok in ("E", "A"):
            v, j = self.var(i + 1)
            body, j = self.formula(j)
            return (Exists(v, body) if tok == "E" else forall(v, body)), j
        if tok == "P":
            j = self.expect(i + 1, "(")
            t, j = self.term(j)
            return P(t), self.expect(j, ")")
        if tok == "(":
            try:
                left, j = self.formula(i + 1)
            except ParseError:
                left = None
            if left is not None:
                op = self.peek(j)
                if op in ("|", "&", "->"):
                    right, k = self.formula(j + 1)
                    k = self.expect(k, ")")
                    if op == "|":
                        return Or(left, right), k
                    if op == "&":
                        return and_(left, right), k
                    return implies(left, right), k
                if op == ")":
                    return left, j + 1
            s, j = self.term(i + 1)
            j = self.expect(j, "=")
            t, j = self.term(j)
            return Eq(s, t), self.expect(j, ")")
        raise self.fail(i, "a formula")


def parse_formula(text: str, line=None) -> Formula:
    p = _Parser(text, line)
    if not p.tokens:
        raise ParseError("empty input", line)
    phi, i = p.formula(0)
    if i != len(p.tokens):
        raise p.fail(i, "end of input")
    return phi


def parse_term(text: str, line=None) -> Term:
    p = _Parser(text, line)
    if not p.tokens:
        raise ParseError("empty input", line)
    t, i = p.term(0)
    if i != len(p.tokens):
        raise p.fail(i, "end of input")
    return t
