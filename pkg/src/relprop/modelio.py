"""Plain-text model files.

A model file is self-contained so ``predict`` needs only the facts to score::

    relprop-model	1
    classes	pos	neg
    combination	mean
    requested_size	3
    decl	bond(key,obj,obj)
    feature	0.5	bond(A,B,C), bond(A,C,D).
    archive	0	4	0	2
    member	1.0	0	2
    prior	0.5	0.5
    cond	0	0.75	0.25
    cond	2	0.6	0.4
    end

Floats are written with ``repr`` so reading a file back gives bit-identical
parameters. Each ``member`` line gives the smoothing and subset, followed by the
priors and one ``cond`` line per feature of the subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bayes import NBModel
from .ensemble import Ensemble
from .errors import ParseError
from .grasp import Solution
from .logic import BiasDecl, Query
from .parsing import parse_bias, parse_query

MAGIC = "relprop-model"
VERSION = "1"


@dataclass(frozen=True, eq=False)
class TrainedModel:
    classes: tuple[str, ...]
    bias: tuple[BiasDecl, ...]
    queries: tuple[Query, ...]
    supports: tuple[float, ...]
    ensemble: Ensemble


def format_nb(model: NBModel, header: str = "member") -> list[str]:
    lines = ["\t".join([header, repr(float(model.smoothing)), *map(str, model.subset)])]
    lines.append("\t".join(["prior", *(repr(float(p)) for p in model.priors)]))
    for i, row in zip(model.subset, model.cond):
        lines.append("\t".join(["cond", str(i), *(repr(float(p)) for p in row)]))
    return lines


def dumps(tm: TrainedModel) -> str:
    ens = tm.ensemble
    lines = [
        f"{MAGIC}\t{VERSION}",
        "\t".join(["classes", *tm.classes]),
        f"combination\t{ens.combination}",
        f"requested_size\t{ens.requested_size}",
    ]
    lines += [f"decl\t{d.predicate}({','.join(d.arg_types)})" for d in tm.bias]
    lines += [f"feature\t{s!r}\t{q}." for q, s in zip(tm.queries, tm.supports)]
    lines += ["\t".join(["archive", str(s.iteration), str(s.score), *map(str, s.indices)])
              for s in ens.archive]
    for m in ens.members:
        lines += format_nb(m)
    lines.append("end")
    return "".join(line + "\n" for line in lines)


def loads(text: str) -> TrainedModel:
    rows = [(n, line.split("\t")) for n, line in enumerate(text.splitlines(), 1) if line.strip()]
    if not rows or rows[0][1][:1] != [MAGIC]:
        raise ParseError(f"not a {MAGIC} file", 1, 1)
    if rows[-1][1] != ["end"]:
        raise ParseError("model file is truncated (no 'end' line)", rows[-1][0], 1)

    classes: tuple[str, ...] = ()
    combination, requested = "mean", 1
    decls, queries, supports, archive = [], [], [], []
    members: list[NBModel] = []
    pending: list | None = None  # [smoothing, subset, priors, cond rows]

    def flush():
        if pending is not None:
            members.append(NBModel(pending[1], pending[2], pending[3], pending[0]))

    try:
        for lineno, f in rows[1:-1]:
            tag = f[0]
            if tag == "classes":
                classes = tuple(f[1:])
            elif tag == "combination":
                combination = f[1]
            elif tag == "requested_size":
                requested = int(f[1])
            elif tag == "decl":
                decls.extend(parse_bias(f"decl({f[1]})."))
            elif tag == "feature":
                supports.append(float(f[1]))
                queries.append(parse_query(f[2]))
            elif tag == "archive":
                archive.append(Solution(frozenset(int(x) for x in f[3:]), int(f[2]), int(f[1])))
            elif tag == "member":
                flush()
                pending = [float(f[1]), [int(x) for x in f[2:]], None, []]
            elif tag == "prior":
                pending[2] = [float(x) for x in f[1:]]
            elif tag == "cond":
                pending[3].append([float(x) for x in f[2:]])
            else:
                raise ParseError(f"unknown record {tag!r}", lineno, 1)
        flush()
    except ParseError:
        raise
    except (ValueError, IndexError, TypeError) as exc:
        raise ParseError(f"malformed model record: {exc}", lineno, 1) from None
    if not members:
        raise ParseError("model file has no members", rows[-1][0], 1)
    ens = Ensemble(tuple(members), requested, combination, tuple(archive))
    return TrainedModel(classes, tuple(decls), tuple(queries), tuple(supports), ens)


def format_members(members: Sequence[NBModel]) -> str:
    return "".join(line + "\n" for m in members for line in format_nb(m))
