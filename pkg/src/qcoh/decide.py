"""Equality of arrow terms by their graphs, one-step rewriting with the
axiomatic equations, and the structural lemma checks on graphs.

Two terms of the same type are equal in the free category exactly when
their graphs coincide, so the decision is a type comparison followed by
a graph comparison.  Unequal verdicts carry the first point where the
graphs part ways.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Any, Iterator

from .arrows import Arrow, Comp, QArrow, Ren, Tensor, children, typecheck
from .errors import KernelError, NoMatch
from .generate import Gen, gen_random_arrow
from .graphs import first_difference, graph_of
from .lang import AND, OR, Atom, Bin, Formula, Neg, Quant, System, all_vars
from .schemas import (
    AxiomSchema, Unbound, Variant, axiom_schemas, instantiate, is_var_meta, match, metas,
)

__all__ = ["Verdict", "decide_eq", "rewrite_once", "rewrite_chain", "gen_random_arrow",
           "and_or_violations", "or_and_violations", "positions", "subterm_at", "replace_at"]

LR, RL = "lr", "rl"


@dataclass(frozen=True)
class Verdict:
    """'equal', 'unequal' (with a witness) or 'type-mismatch' (with both
    types)."""
    kind: str
    witness: dict | None = None
    lhs_type: str | None = None
    rhs_type: str | None = None

    @property
    def equal(self) -> bool:
        return self.kind == "equal"

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"verdict": self.kind}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.kind == "type-mismatch":
            out["lhs_type"], out["rhs_type"] = self.lhs_type, self.rhs_type
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, separators=(",", ":"))


def decide_eq(f: Arrow, g: Arrow, system: System | str = System.QMPN_NEG) -> Verdict:
    """Equal iff both have the same type and the same graph.  Raises the
    typechecking error when either term is ill-typed in system."""
    tf = typecheck(f, system)
    tg = typecheck(g, system)
    if tf != tg:
        return Verdict("type-mismatch", lhs_type=str(tf), rhs_type=str(tg))
    diff = first_difference(graph_of(f), graph_of(g))
    if diff is None:
        return Verdict("equal")
    return Verdict("unequal", witness=diff)


# --- positions -----------------------------------------------------------------

Path = tuple[int, ...]


def positions(t: Arrow, path: Path = ()) -> Iterator[Path]:
    """Every subterm address, root first."""
    yield path
    for i, c in enumerate(children(t)):
        yield from positions(c, path + (i,))


def subterm_at(t: Arrow, path: Path) -> Arrow:
    for i in path:
        kids = children(t)
        if i >= len(kids):
            raise NoMatch(f"no subterm at {path}")
        t = kids[i]
    return t


def _with_child(t: Arrow, i: int, c: Arrow) -> Arrow:
    if isinstance(t, Comp):
        return Comp(c, t.f) if i == 0 else Comp(t.g, c)
    if isinstance(t, Tensor):
        return Tensor(t.op, c, t.g) if i == 0 else Tensor(t.op, t.f, c)
    if isinstance(t, QArrow):
        return QArrow(t.q, t.x, c)
    if isinstance(t, Ren):
        return Ren(t.x, t.y, c)
    raise NoMatch(f"{type(t).__name__} has no children")


def replace_at(t: Arrow, path: Path, new: Arrow) -> Arrow:
    if not path:
        return new
    kids = children(t)
    return _with_child(t, path[0], replace_at(kids[path[0]], path[1:], new))


# --- rewriting -----------------------------------------------------------------

def _term_vars(t: Arrow) -> set[str]:
    out: set[str] = set()
    for p in positions(t):
        s = subterm_at(t, p)
        out |= all_vars(s.source) | all_vars(s.target)
        if isinstance(s, (QArrow, Ren)):
            out.add(s.x)
        if isinstance(s, Ren):
            out.add(s.y)
    return out


def _complete(v: Variant, out_side: Any, inst: dict, gen: Gen, used: set[str]) -> None:
    """Fill metas that only the output side mentions."""
    if v.complete is not None:
        v.complete(inst, gen, used)
    for m in sorted(metas(out_side) - set(inst)):
        if is_var_meta(m):
            fresh = [p for p in ("x", "y", "z", "w") if p not in used]
            inst[m] = gen.rng.choice(fresh) if fresh else f"v{len(used)}"
            used.add(inst[m])
        elif m[:1].isupper() and m not in ("U",):
            inst[m] = gen.formula(gen.rng.randint(0, 1))
        else:
            raise NoMatch(f"cannot invent the arrow metavariable {m}")


def rewrite_once(f: Arrow, schema: AxiomSchema, position: Path = (), direction: str = LR,
                 system: System | str = System.QMPN_NEG, seed: int | random.Random = 0) -> Arrow:
    """Replace the instance of one side of schema found at position by the
    matching instance of the other side.  Metavariables the other side
    needs but the match does not fix are chosen fresh from seed.  The
    result has the type and the graph of f; otherwise NoMatch."""
    system = System.parse(system)
    ftype = typecheck(f, system)
    target = subterm_at(f, tuple(position))
    gen = Gen(seed, system)
    used = _term_vars(f)
    for v in schema.available(system):
        src_side, out_side = (v.lhs, v.rhs) if direction == LR else (v.rhs, v.lhs)
        inst = match(src_side, target)
        if inst is None:
            continue
        try:
            _complete(v, out_side, inst, gen, set(used))
            if not v.proviso(inst):
                continue
            new = instantiate(out_side, inst)
            result = replace_at(f, tuple(position), new)
            if typecheck(result, system) != ftype:
                continue
        except (KernelError, Unbound, KeyError):
            continue
        return result
    raise NoMatch(f"{schema.name} does not apply at {tuple(position)} ({direction})")


def rewrite_chain(f: Arrow, steps: int, system: System | str, seed: int,
                  tries_per_step: int = 60) -> tuple[Arrow, list[tuple[str, Path, str]]]:
    """Up to steps random successful rewrites of f; returns the final term
    and the log of (schema, position, direction)."""
    system = System.parse(system)
    rng = random.Random(seed)
    table = axiom_schemas(system)
    log: list[tuple[str, Path, str]] = []
    for _ in range(steps):
        paths = list(positions(f))
        for _ in range(tries_per_step):
            schema = rng.choice(table)
            path = rng.choice(paths)
            direction = rng.choice((LR, RL))
            try:
                f = rewrite_once(f, schema, path, direction, system, rng.randrange(2**31))
            except NoMatch:
                continue
            log.append((schema.name, path, direction))
            break
    return f, log


# --- structural lemmas on graphs --------------------------------------------------

def _contexts(a: Formula) -> tuple[list[str | None], list[tuple[int, int] | None]]:
    """For each atom occurrence: the connective reached by climbing through
    quantifiers only, and, when the occurrence is an immediate child of a
    binary node whose two children are both atoms, that node's id with the
    occurrence's side."""
    ops: list[str | None] = []
    pairs: list[tuple[int, int] | None] = []
    counter = [0]

    def walk(b: Formula, up_op: str | None, pair: tuple[int, int] | None) -> None:
        if isinstance(b, Atom):
            ops.append(up_op)
            pairs.append(pair)
        elif isinstance(b, Quant):
            walk(b.body, up_op, None)
        elif isinstance(b, Neg):
            walk(b.body, None, None)
        elif isinstance(b, Bin):
            counter[0] += 1
            node = counter[0]
            both = isinstance(b.left, Atom) and isinstance(b.right, Atom)
            walk(b.left, b.op, (node, 0) if both else None)
            walk(b.right, b.op, (node, 1) if both else None)

    walk(a, None, None)
    return ops, pairs


def _ties(f: Arrow) -> list[int]:
    """For every source occurrence, the target occurrence it is tied to
    (or -1 when it is linked within the source)."""
    g = graph_of(f)
    return [int(g.partner[p]) - g.n if g.partner[p] >= g.n else -1 for p in range(g.n)]


def and_or_violations(f: Arrow) -> list[tuple[int, int]]:
    """Tied pairs (source occurrence, target occurrence) where the source
    one sits, under quantifiers only, in a conjunction and the target one
    in a disjunction."""
    src_ops, _ = _contexts(f.source)
    tgt_ops, _ = _contexts(f.target)
    return [(p, q) for p, q in enumerate(_ties(f))
            if q >= 0 and src_ops[p] == AND and tgt_ops[q] == OR]


def or_and_violations(f: Arrow) -> list[tuple[int, int]]:
    """Disjunctions of two atoms in the source whose occurrences are tied
    to the two conjuncts of a conjunction of two atoms in the target."""
    _, src_pairs = _contexts(f.source)
    _, tgt_pairs = _contexts(f.target)
    ties = _ties(f)
    out = []
    by_node: dict[int, list[int]] = {}
    for p, pr in enumerate(src_pairs):
        if pr is not None:
            by_node.setdefault(pr[0], []).append(p)
    for node, (p1, p2) in ((k, v) for k, v in by_node.items() if len(v) == 2):
        if not _is_op(f.source, node, OR):
            continue
        q1, q2 = ties[p1], ties[p2]
        if q1 < 0 or q2 < 0:
            continue
        t1, t2 = tgt_pairs[q1], tgt_pairs[q2]
        if t1 is not None and t2 is not None and t1[0] == t2[0] and _is_op(f.target, t1[0], AND):
            out.append((p1, p2))
    return out


def _is_op(a: Formula, node: int, op: str) -> bool:
    counter = [0]
    found: list[str] = []

    def walk(b: Formula) -> None:
        if isinstance(b, (Quant, Neg)):
            walk(b.body)
        elif isinstance(b, Bin):
            counter[0] += 1
            if counter[0] == node:
                found.append(b.op)
            walk(b.left)
            walk(b.right)

    walk(a)
    return bool(found) and found[0] == op
