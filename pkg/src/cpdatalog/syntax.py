"""Datalog terms, programs, the text parser and CSV fact loading.

Concrete syntax::

    % comment
    edge(1, 2).                      fact
    path(X, Y) :- edge(X, Y).        rule
    path(X, Z) :- edge(X, Y), path(Y, Z).

Predicates and symbolic constants are lowercase identifiers (or double
quoted strings); integers may be signed; variables start with an uppercase
letter or an underscore, and every ``_`` is a fresh anonymous variable.
"""
from __future__ import annotations

import csv
import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .values import Sym, Value, parse_value

__all__ = [
    "Var",
    "Atom",
    "Rule",
    "Program",
    "DatalogError",
    "DatalogSyntaxError",
    "ArityError",
    "NonGroundFactError",
    "RangeRestrictionError",
    "parse_program",
    "parse_query",
    "body_variables",
    "load_csv_facts",
]


class DatalogError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        if self.line is None:
            return self.message
        return f"{self.line}:{self.column}: {self.message}"


class DatalogSyntaxError(DatalogError):
    pass


class ArityError(DatalogError):
    pass


class NonGroundFactError(DatalogError):
    pass


class RangeRestrictionError(DatalogError):
    pass


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name if not self.name.startswith("_#") else "_"


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple
    line: Optional[int] = field(default=None, compare=False, repr=False)
    column: Optional[int] = field(default=None, compare=False, repr=False)

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> list:
        return [a for a in self.args if isinstance(a, Var)]

    def is_ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(_format_term(a) for a in self.args)})"


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple

    def __str__(self):
        return f"{self.head} :- {', '.join(map(str, self.body))}."


@dataclass
class Program:
    rules: list = field(default_factory=list)
    facts: dict = field(default_factory=dict)
    arities: dict = field(default_factory=dict)

    def idb_predicates(self) -> set:
        return {r.head.pred for r in self.rules}

    def declare(self, pred: str, arity: int, line=None, column=None) -> None:
        known = self.arities.setdefault(pred, arity)
        if known != arity:
            raise ArityError(f"predicate {pred} used with arity {arity} and {known}", line, column)

    def add_facts(self, pred: str, rows: Iterable[tuple], arity: Optional[int] = None) -> None:
        if arity is not None:
            self.declare(pred, arity)
        bucket = self.facts.setdefault(pred, set())
        for row in rows:
            self.declare(pred, len(row))
            bucket.add(tuple(row))


def body_variables(body: Iterable[Atom]) -> list:
    """Distinct variables of ``body`` in order of first occurrence."""
    return list(dict.fromkeys(v for atom in body for v in atom.variables()))


_PLAIN_SYM = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def _format_term(term) -> str:
    if isinstance(term, Var):
        return str(term)
    if isinstance(term, Sym) and not _PLAIN_SYM.match(term.text):
        return '"' + term.text.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return str(term)


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<if>:-)
  | (?P<int>[+-]?\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[(),.])
""", re.VERBOSE)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DatalogSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "punct":
            kind = chunk
        if kind != "ws":
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.fresh = itertools.count()

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != kind:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise DatalogSyntaxError(f"expected {kind!r}, found {found}", tok.line, tok.column)
        self.i += 1
        return tok

    def term(self):
        tok = self.peek()
        self.i += 1
        if tok.kind == "var":
            if tok.text == "_":
                return Var(f"_#{next(self.fresh)}")
            return Var(tok.text)
        if tok.kind == "int":
            return int(tok.text)
        if tok.kind == "ident":
            return Sym(tok.text)
        if tok.kind == "string":
            return Sym(re.sub(r"\\(.)", r"\1", tok.text[1:-1]))
        self.i -= 1
        raise DatalogSyntaxError(f"expected a term, found {tok.text or 'end of input'!r}", tok.line, tok.column)

    def atom(self) -> Atom:
        name = self.take("ident")
        args = []
        if self.peek().kind == "(":
            self.i += 1
            if self.peek().kind != ")":
                args.append(self.term())
                while self.peek().kind == ",":
                    self.i += 1
                    args.append(self.term())
            self.take(")")
        return Atom(name.text, tuple(args), name.line, name.column)

    def body(self) -> list:
        atoms = [self.atom()]
        while self.peek().kind == ",":
            self.i += 1
            atoms.append(self.atom())
        return atoms


def _check_rule(program: Program, rule: Rule) -> None:
    for atom in (rule.head, *rule.body):
        program.declare(atom.pred, atom.arity, atom.line, atom.column)
    bound = {v for atom in rule.body for v in atom.variables()}
    for v in rule.head.variables():
        if v not in bound:
            h = rule.head
            raise RangeRestrictionError(f"head variable {v} does not occur in the body of {h.pred}",
                                        h.line, h.column)


def parse_program(text: str) -> Program:
    """Parse and validate Datalog source text."""
    p = _Parser(text)
    program = Program()
    while p.peek().kind != "eof":
        head = p.atom()
        if p.peek().kind == "if":
            p.i += 1
            rule = Rule(head, tuple(p.body()))
            p.take(".")
            _check_rule(program, rule)
            program.rules.append(rule)
        else:
            p.take(".")
            if not head.is_ground():
                raise NonGroundFactError(f"fact {head} contains variables", head.line, head.column)
            program.declare(head.pred, head.arity, head.line, head.column)
            program.facts.setdefault(head.pred, set()).add(head.args)
    return program


def parse_query(text: str) -> list:
    """Parse a comma separated list of atoms; a trailing ``.`` is optional."""
    p = _Parser(text)
    body = p.body()
    if p.peek().kind == ".":
        p.i += 1
    p.take("eof")
    return body


def load_csv_facts(path, encoding: str = "utf-8") -> list:
    """Rows of a header-less CSV file as value tuples."""
    rows = []
    with open(path, newline="", encoding=encoding) as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row:
                continue
            values = tuple(parse_value(cell.strip()) for cell in row)
            if rows and len(values) != len(rows[0]):
                raise ArityError(f"{path}: row has {len(values)} columns, expected {len(rows[0])}", lineno, 1)
            rows.append(values)
    return rows
