"""Readers for facts files, bias files, query strings and mined-feature files.

Facts file::

    example(e1, pos).
    bond(e1, a, b).        % the key argument names the example

Bias file::

    decl(bond(key, obj, obj)).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DataError, ParseError
from .logic import (
    CONSTANT,
    KEY_TYPE,
    VARIABLE,
    Atom,
    BiasDecl,
    Dataset,
    Example,
    Query,
    Term,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<number>-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\n]|'')*')
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # number, var, name, quoted, punct, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> Iterator[Token]:
    pos = 0
    line, line_start = 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            yield Token(kind, chunk, line, pos - line_start + 1)
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    yield Token("eof", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if self.tok.kind != "punct" or self.tok.text != text:
            raise self.error(f"expected {text!r}")
        return self.advance()

    def at(self, text: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text == text

    def term(self, variables: dict[str, Term] | None) -> Term:
        t = self.tok
        if t.kind == "var":
            if variables is None:
                raise self.error("variables are not allowed here")
            self.advance()
            return variables.setdefault(t.text, Term(VARIABLE, t.text))
        if t.kind in ("name", "number"):
            self.advance()
            return Term(CONSTANT, t.text)
        if t.kind == "quoted":
            self.advance()
            body = t.text[1:-1].replace("''", "'")
            if not body:
                raise self.error("empty quoted constant", t)
            return Term(CONSTANT, body)
        raise self.error("expected a term")

    def atom(self, variables: dict[str, Term] | None) -> tuple[Atom, Token]:
        start = self.tok
        if start.kind != "name":
            raise self.error("expected a predicate name")
        self.advance()
        self.expect("(")
        args = [self.term(variables)]
        while self.at(","):
            self.advance()
            args.append(self.term(variables))
        self.expect(")")
        return Atom(start.text, tuple(args)), start

    def clauses(self, variables_allowed: bool) -> Iterator[tuple[Atom, Token]]:
        while self.tok.kind != "eof":
            atom, start = self.atom({} if variables_allowed else None)
            self.expect(".")
            yield atom, start


def parse_query(text: str, allow_ground: bool = False) -> Query:
    """Parse ``"bond(K,X,Y), atom(K,X,c)"`` into a Query. A trailing '.' is accepted."""
    p = _Parser(text)
    variables: dict[str, Term] = {}
    atoms = []
    while True:
        atom, start = p.atom(variables)
        if atom.is_ground and not allow_ground:
            raise ParseError(f"ground atom {atom} in query", start.line, start.col)
        atoms.append((atom, start))
        if not p.at(","):
            break
        p.advance()
    if p.at("."):
        p.advance()
    if p.tok.kind != "eof":
        raise p.error("expected ',' or end of query")
    try:
        return Query(tuple(a for a, _ in atoms))
    except ValueError as exc:
        start = atoms[-1][1]
        raise ParseError(str(exc), start.line, start.col) from None


def parse_bias(text: str) -> list[BiasDecl]:
    decls: dict[str, BiasDecl] = {}
    p = _Parser(text)
    while p.tok.kind != "eof":
        head = p.tok
        if head.kind != "name" or head.text != "decl":
            raise p.error("expected 'decl'")
        p.advance()
        p.expect("(")
        inner, start = p.atom(None)
        p.expect(")")
        p.expect(".")
        types = []
        for t in inner.args:
            if t.kind != CONSTANT or not re.match(r"[a-z]", t.name):
                raise ParseError(f"bad argument type {t} in declaration of {inner.predicate}",
                                 start.line, start.col)
            types.append(t.name)
        if inner.predicate == "example":
            raise DataError("'example' is reserved and cannot be declared", start.line, start.col)
        if inner.predicate in decls:
            raise DataError(f"duplicate declaration for {inner.predicate}", start.line, start.col)
        if KEY_TYPE not in types:
            raise DataError(f"declaration of {inner.predicate} has no '{KEY_TYPE}' argument",
                            start.line, start.col)
        decls[inner.predicate] = BiasDecl(inner.predicate, tuple(types))
    return list(decls.values())


def parse_dataset(
    facts_text: str,
    bias_text: str,
    classes: Sequence[str] | None = None,
    strict_labels: bool = True,
) -> tuple[Dataset, list[BiasDecl]]:
    """Read a facts file against its bias declarations.

    Labels are mapped to 1-based class indices in order of first appearance,
    unless ``classes`` fixes the mapping. With ``strict_labels=False`` a label
    outside ``classes`` yields an example with ``label=None`` (used when
    predicting on files whose labels are unknown).
    """
    bias = parse_bias(bias_text)
    by_pred = {d.predicate: d for d in bias}

    declared: dict[str, str] = {}
    order: list[str] = []
    facts: list[tuple[Atom, Token]] = []
    for atom, start in _Parser(facts_text).clauses(variables_allowed=False):
        if atom.predicate == "example":
            if atom.arity != 2:
                raise DataError("example/2 expects (Id, Label)", start.line, start.col)
            ex_id, label = atom.args[0].name, atom.args[1].name
            if ex_id in declared:
                raise DataError(f"duplicate example id {ex_id}", start.line, start.col)
            declared[ex_id] = label
            order.append(ex_id)
        else:
            facts.append((atom, start))
    if not order:
        raise DataError("no examples declared")

    if classes is None:
        class_names = list(dict.fromkeys(declared[i] for i in order))
    else:
        class_names = list(classes)
    class_index = {c: k + 1 for k, c in enumerate(class_names)}

    grouped: dict[str, dict[Atom, None]] = {i: {} for i in order}
    for atom, start in facts:
        decl = by_pred.get(atom.predicate)
        if decl is None:
            raise DataError(f"predicate {atom.predicate} has no bias declaration",
                            start.line, start.col)
        if atom.arity != decl.arity:
            raise DataError(f"arity mismatch for {atom.predicate}: "
                            f"declared {decl.arity}, found {atom.arity}", start.line, start.col)
        key = atom.args[min(decl.key_positions)].name
        if key not in grouped:
            raise DataError(f"unknown example id {key}", start.line, start.col)
        grouped[key][atom] = None

    examples = []
    for ex_id in order:
        label = class_index.get(declared[ex_id])
        if label is None and strict_labels:
            raise DataError(f"example {ex_id} has unknown label {declared[ex_id]}")
        examples.append(Example(ex_id, frozenset(grouped[ex_id]), label))
    return Dataset(tuple(examples), tuple(class_names), tuple(bias)), bias


def parse_features(text: str) -> tuple[list[Query], list[float]]:
    """Read the ``<support>\\t<query>.`` file written by :func:`format_features`."""
    queries, supports = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("%"):
            continue
        sup, sep, body = line.partition("\t")
        if not sep:
            raise ParseError("expected '<support>\\t<query>.'", lineno, 1)
        try:
            supports.append(float(sup))
        except ValueError:
            raise ParseError(f"bad support value {sup!r}", lineno, 1) from None
        try:
            queries.append(parse_query(body))
        except ParseError as exc:
            raise ParseError(exc.message, lineno, len(sup) + 1 + exc.col) from None
    return queries, supports


def format_features(queries: Sequence[Query], supports: Sequence[float]) -> str:
    return "".join(f"{s!r}\t{q}.\n" for q, s in zip(queries, supports))
