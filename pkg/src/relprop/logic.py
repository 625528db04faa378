"""Core logic types: terms, atoms, queries, examples and datasets."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

VARIABLE = "var"
CONSTANT = "const"

_VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*\Z")
_BARE_CONST_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?\Z")

KEY_TYPE = "key"


@dataclass(frozen=True, slots=True)
class Term:
    kind: str
    name: str

    def __post_init__(self):
        if self.kind == VARIABLE:
            if not _VAR_RE.match(self.name):
                raise ValueError(f"invalid variable name {self.name!r}")
        elif self.kind == CONSTANT:
            if not self.name:
                raise ValueError("empty constant name")
        else:
            raise ValueError(f"unknown term kind {self.kind!r}")

    @property
    def is_var(self) -> bool:
        return self.kind == VARIABLE

    def __str__(self):
        if self.kind == VARIABLE:
            return self.name
        if _BARE_CONST_RE.match(self.name) or _NUMBER_RE.match(self.name):
            return self.name
        return "'" + self.name.replace("'", "''") + "'"


def var(name: str) -> Term:
    return Term(VARIABLE, name)


def const(name: str) -> Term:
    return Term(CONSTANT, name)


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: tuple[Term, ...]

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return not any(t.is_var for t in self.args)

    def variables(self) -> list[Term]:
        return [t for t in self.args if t.is_var]

    def __str__(self):
        return f"{self.predicate}({','.join(str(t) for t in self.args)})"


@dataclass(frozen=True)
class Query:
    """A linked conjunction of atoms, read as an existential pattern."""

    atoms: tuple[Atom, ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("a query needs at least one atom")
        seen: set[Term] = set()
        for i, atom in enumerate(self.atoms):
            vs = atom.variables()
            # ground atoms are exempt; they only appear when explicitly allowed
            if i > 0 and vs and not seen.intersection(vs):
                raise ValueError(f"atom {atom} is not linked to the preceding atoms")
            seen.update(vs)

    @cached_property
    def vars(self) -> tuple[Term, ...]:
        out: dict[Term, None] = {}
        for atom in self.atoms:
            for t in atom.args:
                if t.is_var:
                    out.setdefault(t)
        return tuple(out)

    @cached_property
    def constants(self) -> frozenset[Term]:
        return frozenset(t for a in self.atoms for t in a.args if not t.is_var)

    def __len__(self):
        return len(self.atoms)

    def __str__(self):
        return ", ".join(str(a) for a in self.atoms)

    def extend(self, atom: Atom) -> "Query":
        return Query(self.atoms + (atom,))


@dataclass(frozen=True)
class BiasDecl:
    predicate: str
    arg_types: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.arg_types)

    @property
    def key_positions(self) -> frozenset[int]:
        return frozenset(i for i, t in enumerate(self.arg_types) if t == KEY_TYPE)

    def __str__(self):
        return f"decl({self.predicate}({','.join(self.arg_types)}))."


@dataclass(frozen=True)
class Example:
    id: str
    facts: frozenset[Atom]
    label: int | None

    @cached_property
    def index(self) -> dict[tuple[str, int], list[tuple[Term, ...]]]:
        """Fact argument tuples grouped by (predicate, arity), in sorted order."""
        out: dict[tuple[str, int], list[tuple[Term, ...]]] = {}
        for atom in sorted(self.facts, key=_atom_sort_key):
            out.setdefault((atom.predicate, atom.arity), []).append(atom.args)
        return out


def _atom_sort_key(atom: Atom):
    return (atom.predicate, tuple((t.kind, t.name) for t in atom.args))


@dataclass(frozen=True)
class Dataset:
    examples: tuple[Example, ...]
    classes: tuple[str, ...]
    bias: tuple[BiasDecl, ...] = field(default=())

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def __len__(self):
        return len(self.examples)

    @property
    def labels(self) -> list[int | None]:
        return [e.label for e in self.examples]

    def subset(self, indices: Iterable[int]) -> "Dataset":
        return Dataset(tuple(self.examples[i] for i in indices), self.classes, self.bias)


def variable_name(i: int) -> str:
    """Deterministic name for the i-th variable of a generated query."""
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if i < len(letters):
        return letters[i]
    return f"V{i}"


def rename_variables(query: Query, names: Sequence[str] | None = None) -> Query:
    """Rename variables by first occurrence to A, B, C, ... (or the given names)."""
    mapping = {}
    for i, v in enumerate(query.vars):
        mapping[v] = var(names[i] if names is not None else variable_name(i))
    return Query(tuple(Atom(a.predicate, tuple(mapping.get(t, t) for t in a.args))
                       for a in query.atoms))
