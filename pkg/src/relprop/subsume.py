"""Subsumption under Object Identity.

A substitution is admissible when it is injective on the query variables and
never binds a variable to a constant written in the query itself.
"""

from __future__ import annotations

from typing import Hashable, Mapping, Sequence

from .logic import Atom, Example, Query, Term

FactIndex = Mapping[tuple[str, int], Sequence[tuple[Hashable, ...]]]


def _compile(query: Query):
    slots = {v: i for i, v in enumerate(query.vars)}
    plan = []
    for atom in query.atoms:
        # (is_var, slot-or-constant) per argument
        plan.append(((atom.predicate, atom.arity),
                     tuple((True, slots[t]) if t.is_var else (False, t) for t in atom.args)))
    return plan, len(slots)


def match_oi(query: Query, index: FactIndex) -> list | None:
    """Return one admissible binding (indexed by ``query.vars``) or None.

    Atoms are matched left to right with chronological backtracking. The
    target values may be any hashable objects; query constants only match
    themselves.
    """
    plan, nvars = _compile(query)
    forbidden = query.constants
    binding: list = [None] * nvars
    used: set = set()

    def solve(k: int) -> bool:
        if k == len(plan):
            return True
        key, args = plan[k]
        for fact in index.get(key, ()):
            newly = []
            ok = True
            for (is_var, ref), value in zip(args, fact):
                if not is_var:
                    if ref != value:
                        ok = False
                        break
                    continue
                bound = binding[ref]
                if bound is not None:
                    if bound != value:
                        ok = False
                        break
                elif value in used or value in forbidden:
                    ok = False
                    break
                else:
                    binding[ref] = value
                    used.add(value)
                    newly.append(ref)
            if ok and solve(k + 1):
                return True
            for ref in newly:
                used.discard(binding[ref])
                binding[ref] = None
        return False

    return list(binding) if solve(0) else None


def oi_subsumes(query: Query, example: Example) -> bool:
    return match_oi(query, example.index) is not None


def _as_index(query: Query) -> dict[tuple[str, int], list[tuple[Term, ...]]]:
    # variables of the target act as fresh constants: distinct from every
    # constant and from each other
    out: dict[tuple[str, int], list[tuple[Term, ...]]] = {}
    for atom in dict.fromkeys(query.atoms):
        out.setdefault((atom.predicate, atom.arity), []).append(atom.args)
    return out


def oi_matches_query(q1: Query, q2: Query) -> bool:
    """True if q1 OI-subsumes q2 read as a ground conjunction."""
    return match_oi(q1, _as_index(q2)) is not None


def oi_equivalent(q1: Query, q2: Query) -> bool:
    """Equivalence up to a bijective renaming of variables."""
    if len(set(q1.atoms)) != len(set(q2.atoms)) or len(q1.vars) != len(q2.vars):
        return False
    return oi_matches_query(q1, q2) and oi_matches_query(q2, q1)


def atom_signature(query: Query):
    """A renaming-invariant key: equivalent queries always share it."""
    atoms = set(query.atoms)
    degree: dict[Term, int] = {}
    for a in atoms:
        for t in a.args:
            if t.is_var:
                degree[t] = degree.get(t, 0) + 1
    shapes = []
    for a in atoms:
        first: dict[Term, int] = {}
        pattern = []
        for t in a.args:
            if t.is_var:
                pattern.append(("v", first.setdefault(t, len(first)), degree[t]))
            else:
                pattern.append(("c", t.name))
        shapes.append((a.predicate, a.arity, tuple(pattern)))
    return tuple(sorted(shapes))


def substitute(atom: Atom, mapping: Mapping[Term, Term]) -> Atom:
    return Atom(atom.predicate, tuple(mapping.get(t, t) for t in atom.args))
