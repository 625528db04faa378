"""Level-wise mining of frequent linked queries."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError
from .logic import KEY_TYPE, Atom, BiasDecl, Dataset, Query, Term, var, variable_name
from .subsume import atom_signature, oi_equivalent, oi_subsumes

DEFAULT_MIN_SUPPORT = 0.1
DEFAULT_MAX_LENGTH = 6


@dataclass(frozen=True)
class MiningConfig:
    min_support: float = DEFAULT_MIN_SUPPORT
    max_length: int = DEFAULT_MAX_LENGTH
    bias: tuple[BiasDecl, ...] = ()

    def __post_init__(self):
        if not 0.0 < self.min_support <= 1.0:
            raise ConfigError(f"min_support must lie in (0, 1], got {self.min_support}")
        if int(self.max_length) != self.max_length or self.max_length < 1:
            raise ConfigError(f"max_length must be a positive integer, got {self.max_length}")
        object.__setattr__(self, "bias", tuple(self.bias))


@dataclass(frozen=True)
class FeatureSet:
    queries: tuple[Query, ...]
    supports: tuple[float, ...]

    def __len__(self):
        return len(self.queries)


def variable_types(query: Query, bias: Sequence[BiasDecl]) -> dict[Term, str]:
    """Type of each variable, taken from the position of its first occurrence."""
    decls = {d.predicate: d for d in bias}
    types: dict[Term, str] = {}
    for atom in query.atoms:
        decl = decls[atom.predicate]
        for t, ty in zip(atom.args, decl.arg_types):
            if t.is_var:
                types.setdefault(t, ty)
    return types


def most_general(decl: BiasDecl) -> Atom:
    return Atom(decl.predicate, tuple(var(variable_name(i)) for i in range(decl.arity)))


def refine(query: Query, bias: Sequence[BiasDecl]) -> list[Query]:
    """All one-atom specialisations of ``query`` allowed by the bias.

    Each argument of the new atom is an existing variable of the same type or
    a fresh variable (distinct fresh variables per position). Key positions
    only reuse existing key variables. Re-adding an atom already present
    would give an equivalent query and is skipped.
    """
    types = variable_types(query, bias)
    present = set(query.atoms)
    taken = {v.name for v in query.vars}
    fresh_names = []
    i = len(query.vars)
    while len(fresh_names) < max((d.arity for d in bias), default=0):
        name = variable_name(i)
        if name not in taken:
            fresh_names.append(name)
        i += 1
    out = []
    for decl in bias:
        choices = []
        for ty in decl.arg_types:
            existing = [v for v in query.vars if types[v] == ty]
            if ty == KEY_TYPE:
                choices.append(existing)
            else:
                choices.append(existing + [None])
        for combo in itertools.product(*choices):
            if all(c is None for c in combo):
                continue
            fresh = iter(fresh_names)
            args = []
            for c in combo:
                if c is None:
                    args.append(var(next(fresh)))
                else:
                    args.append(c)
            atom = Atom(decl.predicate, tuple(args))
            if atom in present:
                continue
            out.append(query.extend(atom))
    return out


class _Registry:
    """First-seen representatives of OI-equivalence classes."""

    def __init__(self):
        self.buckets: dict[tuple, list[Query]] = {}

    def add(self, query: Query) -> bool:
        bucket = self.buckets.setdefault(atom_signature(query), [])
        if any(oi_equivalent(query, other) for other in bucket):
            return False
        bucket.append(query)
        return True


def support(query: Query, dataset: Dataset) -> float:
    hits = sum(1 for e in dataset.examples if oi_subsumes(query, e))
    return hits / len(dataset)


def mine(dataset: Dataset, cfg: MiningConfig) -> FeatureSet:
    """Breadth-first search of the query lattice, keeping frequent queries only."""
    if len(dataset) == 0:
        raise ConfigError("cannot mine an empty dataset")
    bias = cfg.bias or dataset.bias
    n = len(dataset)
    if cfg.min_support * n < 1:
        warnings.warn(f"min_support {cfg.min_support} is below one example in {n}; "
                      "every query that matches once is frequent", stacklevel=2)

    queries: list[Query] = []
    supports: list[float] = []
    level = [Query((most_general(d),)) for d in bias]
    for length in range(1, cfg.max_length + 1):
        registry = _Registry()
        frequent = []
        for q in level:
            if not registry.add(q):
                continue
            s = support(q, dataset)
            if s >= cfg.min_support:
                frequent.append(q)
                queries.append(q)
                supports.append(s)
        if length == cfg.max_length:
            break
        level = [r for q in frequent for r in refine(q, bias)]
    return FeatureSet(tuple(queries), tuple(supports))
