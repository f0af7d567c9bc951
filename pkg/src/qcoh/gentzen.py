"""Form sets, Gentzen terms and the normalization algorithms on them.

A form set is the class of a formula under associativity and
commutativity of both connectives, taken congruently under quantifiers.
On diversified formulas it has a unique canonical representative: every
chain of one connective is flattened, its members are sorted by their
printed form and the chain is rebuilt nested to the right.  All Gentzen
terms are typed by canonical form sets.

The shuffles that mediate between a formula and its canonical
representative are built from the associativity and commutativity
arrows; on diversified formulas every such shuffle has the graph forced
by the letters, so any choice among them denotes the same arrow.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, fields, replace
from functools import cached_property
from typing import Callable, Iterator, Union

from .arrows import (
    BWD, FWD, Arrow, BCheck, BHat, CCheck, CHat, Comp, D, DeltaAll, GammaAll, GammaEx, Id,
    IotaAll, IotaEx, Mix, QArrow, Ren, Sequent, SigmaEx, Tensor, ThetaAll, ThetaEx,
    compose, d_right, is_identity, seq, subterms, tau_body, typecheck,
)
from .errors import (
    HasCut, KernelError, NotDiversified, NotVariablePure, ParseError, PreconditionError,
    ProvisoViolation, SystemViolation, TargetShapeMismatch, TypeMismatch, UndefinedSubstitution,
)
from .lang import (
    ALL, AND, OR, SOME, Atom, Bin, Formula, Neg, Quant, System, all_vars, count_atoms,
    is_diversified, map_atoms, print_formula, rename_bound, subst,
)

__all__ = [
    "canon", "canon_form_set", "shuffle", "to_canon",
    "Gentzen", "GId", "GCut", "GAnd", "GOr", "GAllL", "GAllR", "GExL", "GExR", "GRen", "GMix",
    "Fresh", "denote", "denote_as", "gentzenize", "identity_term", "is_variable_pure",
    "is_cut_free", "is_renaming_free", "purify", "eliminate_renaming", "eliminate_cut",
    "CutMeasure", "cut_measure", "skeleton", "ClusterReport", "Couple", "compute_clusters",
    "is_eigendiversified", "eigendiversify", "invert_right", "develop", "is_developed",
    "diversify_arrow", "parse_gentzen", "print_gentzen", "height", "gsubterms",
]


# --- form sets -----------------------------------------------------------------

def _key(a: Formula) -> str:
    return print_formula(a)


def comps(a: Formula, op: str) -> list[Formula]:
    """The members of a when read as a chain of op."""
    out: list[Formula] = []
    stack = [a]
    while stack:
        b = stack.pop()
        if isinstance(b, Bin) and b.op == op:
            stack.append(b.right)
            stack.append(b.left)
        else:
            out.append(b)
    return out


def _chain(op: str, items: list[Formula]) -> Formula:
    out = items[-1]
    for b in reversed(items[:-1]):
        out = Bin(op, b, out)
    return out


def canon(a: Formula) -> Formula:
    """The canonical representative of the form set of a (no
    diversification check)."""
    if isinstance(a, Atom):
        return a
    if isinstance(a, Quant):
        return Quant(a.q, a.var, canon(a.body))
    if isinstance(a, Neg):
        raise SystemViolation(f"form sets are negation-free: {a}")
    items = [c for b in (a.left, a.right) for c in comps(canon(b), a.op)]
    return _chain(a.op, sorted(items, key=_key))


def canon_form_set(a: Formula) -> Formula:
    """Checked canonicalization: a must be diversified."""
    if not is_diversified(a):
        raise NotDiversified(f"not diversified: {a}")
    return canon(a)


def join(op: str, *parts: Formula | None) -> Formula:
    """The canonical form set of the op-combination of the given canonical
    parts; None parts are skipped."""
    items = [c for p in parts if p is not None for c in comps(p, op)]
    if not items:
        raise TypeMismatch("empty form set")
    return _chain(op, sorted(items, key=_key))


def minus(whole: Formula, part: Formula, op: str, what: str = "") -> Formula | None:
    """The op-context left in whole once the op-members of part are
    removed, or None when nothing is left."""
    rest = comps(whole, op)
    for c in comps(part, op):
        if c not in rest:
            raise TypeMismatch(f"{what}{print_formula(part)} is not part of {print_formula(whole)}")
        rest.remove(c)
    return _chain(op, rest) if rest else None


def contains(whole: Formula, part: Formula, op: str) -> bool:
    rest = comps(whole, op)
    return all(c in rest for c in comps(part, op))


# --- shuffles ------------------------------------------------------------------

def _assoc(op: str, d: str, a: Formula, b: Formula, c: Formula) -> Arrow:
    return (BHat if op == AND else BCheck)(d, a, b, c)


def _swap(op: str, a: Formula, b: Formula) -> Arrow:
    """a op b |- b op a."""
    return CHat(a, b) if op == AND else CCheck(b, a)


def _merge(op: str, left: Formula, right: Formula) -> Arrow:
    """left op right |- one right-nested chain, both sides being chains."""
    if isinstance(left, Bin) and left.op == op:
        head, rest = left.left, left.right
        inner = _merge(op, rest, right)
        return seq(Tensor(op, Id(head), inner), _assoc(op, BWD, head, rest, right))
    return Id(Bin(op, left, right))


def _swap_at(op: str, items: list[Formula], i: int) -> Arrow:
    a, b = items[i], items[i + 1]
    if i + 2 == len(items):
        step = _swap(op, a, b)
    else:
        rest = _chain(op, items[i + 2:])
        step = compose(_assoc(op, BWD, b, a, rest), Tensor(op, _swap(op, a, b), Id(rest)),
                       _assoc(op, FWD, a, b, rest))
    for k in range(i - 1, -1, -1):
        step = Tensor(op, Id(items[k]), step)
    return step


def _sort_chain(op: str, items: list[Formula]) -> Arrow:
    items = list(items)
    steps: list[Arrow] = []
    for n in range(len(items), 1, -1):
        for i in range(n - 1):
            if _key(items[i]) > _key(items[i + 1]):
                steps.append(_swap_at(op, items, i))
                items[i], items[i + 1] = items[i + 1], items[i]
    if not steps:
        return Id(_chain(op, items))
    return compose(*reversed(steps))


def to_canon(a: Formula) -> Arrow:
    """An isomorphism a |- canon(a) made of associativity and commutativity
    arrows."""
    if isinstance(a, Atom):
        return Id(a)
    if isinstance(a, Quant):
        return QArrow(a.q, a.var, to_canon(a.body))
    if isinstance(a, Neg):
        raise SystemViolation(f"form sets are negation-free: {a}")
    op = a.op
    lt, rt = to_canon(a.left), to_canon(a.right)
    cl, cr = lt.target, rt.target
    merged = _merge(op, cl, cr)
    items = comps(merged.target, op)
    return seq(_sort_chain(op, items), merged, Tensor(op, lt, rt))


def invert_iso(t: Arrow) -> Arrow:
    """The inverse of a term built from 1, b, c, tensor, quantifier and
    composition."""
    if isinstance(t, Id):
        return t
    if isinstance(t, (BHat, BCheck)):
        return replace(t, dir=BWD if t.dir == FWD else FWD)
    if isinstance(t, (CHat, CCheck)):
        return type(t)(t.b, t.a)
    if isinstance(t, Tensor):
        return Tensor(t.op, invert_iso(t.f), invert_iso(t.g))
    if isinstance(t, QArrow):
        return QArrow(t.q, t.x, invert_iso(t.f))
    if isinstance(t, Comp):
        return Comp(invert_iso(t.f), invert_iso(t.g))
    raise TypeError(f"not a shuffle: {t}")


def shuffle(a: Formula, b: Formula) -> Arrow:
    """The shuffle a |- b between two formulas of one form set."""
    if a == b:
        return Id(a)
    ta, tb = to_canon(a), to_canon(b)
    if ta.target != tb.target:
        raise TypeMismatch(f"{print_formula(a)} and {print_formula(b)} are different form sets")
    return seq(invert_iso(tb), ta)


def glue_chain(src: Formula, steps: list[Arrow], tgt: Formula) -> Arrow:
    """Compose steps in application order, inserting shuffles wherever
    consecutive endpoints agree only up to form sets; the result is
    typed src |- tgt."""
    factors: list[Arrow] = []
    here = src
    for h in steps:
        if h.source != here:
            factors.append(shuffle(here, h.source))
        factors.append(h)
        here = h.target
    if here != tgt:
        factors.append(shuffle(here, tgt))
    if not factors:
        return Id(src)
    return seq(*reversed(factors))


# --- fresh variables -----------------------------------------------------------

class Fresh:
    """Deterministic gensym: v$1, v$2, ... skipping every name in avoid.
    One instance per invocation; it is the only mutable state here."""

    def __init__(self, avoid: set[str] | frozenset[str] = frozenset()):
        self.avoid = set(avoid)
        self.counter = itertools.count(1)

    def var(self) -> str:
        while True:
            v = f"v${next(self.counter)}"
            if v not in self.avoid:
                self.avoid.add(v)
                return v

    def reserve(self, names) -> None:
        self.avoid |= set(names)


# --- Gentzen terms ---------------------------------------------------------------

class Gentzen:
    """Base class of Gentzen-term nodes.  ``sequent`` is computed (and the
    node checked) on first access."""

    __slots__ = ()

    @property
    def source(self) -> Formula:
        return self.sequent.source

    @property
    def target(self) -> Formula:
        return self.sequent.target

    @property
    def kids(self) -> tuple["Gentzen", ...]:
        return ()

    def __str__(self) -> str:
        return print_gentzen(self)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ProvisoViolation(msg)


def _inst(body: Formula, x: str, y: str) -> Formula:
    out = subst(body, x, y)
    if out is None:
        raise UndefinedSubstitution(f"({print_formula(body)})^{x}_{y} is not defined")
    return out


@dataclass(frozen=True)
class GId(Gentzen):
    p: Atom

    @cached_property
    def sequent(self) -> Sequent:
        if not isinstance(self.p, Atom):
            raise TypeMismatch(f"identities are atomic in Gentzen terms, got {self.p}")
        return Sequent(self.p, self.p)


@dataclass(frozen=True)
class GCut(Gentzen):
    """f : U |- X | Z and g : X & Y |- W give U & Y |- W | Z."""
    x: Formula
    f: Gentzen
    g: Gentzen

    @property
    def kids(self):
        return (self.f, self.g)

    @cached_property
    def ctx_z(self) -> Formula | None:
        return minus(self.f.target, self.x, OR, "cut: ")

    @cached_property
    def ctx_y(self) -> Formula | None:
        return minus(self.g.source, self.x, AND, "cut: ")

    @cached_property
    def sequent(self) -> Sequent:
        return Sequent(join(AND, self.f.source, self.ctx_y), join(OR, self.g.target, self.ctx_z))


@dataclass(frozen=True)
class GAnd(Gentzen):
    """f : U1 |- Y1 | Z1 and g : U2 |- Y2 | Z2 give U1 & U2 |- (Y1 & Y2) | Z1 | Z2."""
    y1: Formula
    y2: Formula
    f: Gentzen
    g: Gentzen

    @property
    def kids(self):
        return (self.f, self.g)

    @cached_property
    def ctx(self) -> tuple[Formula | None, Formula | None]:
        return minus(self.f.target, self.y1, OR, "and: "), minus(self.g.target, self.y2, OR, "and: ")

    @cached_property
    def principal(self) -> Formula:
        return join(AND, self.y1, self.y2)

    @cached_property
    def sequent(self) -> Sequent:
        z1, z2 = self.ctx
        return Sequent(join(AND, self.f.source, self.g.source), join(OR, self.principal, z1, z2))


@dataclass(frozen=True)
class GOr(Gentzen):
    """f : X1 & U1 |- W1 and g : X2 & U2 |- W2 give (X1 | X2) & U1 & U2 |- W1 | W2."""
    x1: Formula
    x2: Formula
    f: Gentzen
    g: Gentzen

    @property
    def kids(self):
        return (self.f, self.g)

    @cached_property
    def ctx(self) -> tuple[Formula | None, Formula | None]:
        return minus(self.f.source, self.x1, AND, "or: "), minus(self.g.source, self.x2, AND, "or: ")

    @cached_property
    def principal(self) -> Formula:
        return join(OR, self.x1, self.x2)

    @cached_property
    def sequent(self) -> Sequent:
        u1, u2 = self.ctx
        return Sequent(join(AND, self.principal, u1, u2), join(OR, self.f.target, self.g.target))


@dataclass(frozen=True)
class _GQuant(Gentzen):
    """Common shape of the four quantifier rules: the principal formula
    is Q var. body; idx is the witness (left of all, right of some) or
    the eigenvariable (right of all, left of some)."""
    var: str
    body: Formula
    idx: str
    f: Gentzen

    q = ALL
    left = True
    eigen = False

    @property
    def kids(self):
        return (self.f,)

    @cached_property
    def principal(self) -> Formula:
        return Quant(self.q, self.var, self.body)

    @cached_property
    def instance(self) -> Formula:
        return _inst(self.body, self.var, self.idx)

    @cached_property
    def ctx(self) -> Formula | None:
        side = self.f.source if self.left else self.f.target
        return minus(side, canon(self.instance), AND if self.left else OR,
                     f"{type(self).__name__}: ")

    @cached_property
    def sequent(self) -> Sequent:
        if self.left:
            s = Sequent(join(AND, self.principal, self.ctx), self.f.target)
        else:
            s = Sequent(self.f.source, join(OR, self.principal, self.ctx))
        if self.eigen:
            _need(self.idx not in s.source.free and self.idx not in s.target.free,
                  f"eigenvariable {self.idx} is free in the conclusion {s}")
        return s


class GAllL(_GQuant):
    q, left, eigen = ALL, True, False


class GAllR(_GQuant):
    q, left, eigen = ALL, False, True


class GExL(_GQuant):
    q, left, eigen = SOME, True, True


class GExR(_GQuant):
    q, left, eigen = SOME, False, False


for _cls in (GAllL, GAllR, GExL, GExR):
    dataclass(frozen=True)(_cls)

QUANT_RULES = (GAllL, GAllR, GExL, GExR)


@dataclass(frozen=True)
class GRen(Gentzen):
    x: str
    y: str
    f: Gentzen

    @property
    def kids(self):
        return (self.f,)

    @cached_property
    def sequent(self) -> Sequent:
        return Sequent(canon(_inst(self.f.source, self.x, self.y)),
                       canon(_inst(self.f.target, self.x, self.y)))


@dataclass(frozen=True)
class GMix(Gentzen):
    f: Gentzen
    g: Gentzen

    @property
    def kids(self):
        return (self.f, self.g)

    @cached_property
    def sequent(self) -> Sequent:
        return Sequent(join(AND, self.f.source, self.g.source), join(OR, self.f.target, self.g.target))


def with_kids(t: Gentzen, *kids: Gentzen) -> Gentzen:
    if isinstance(t, (GCut, GAnd, GOr, GMix)):
        return replace(t, f=kids[0], g=kids[1])
    if isinstance(t, (_GQuant, GRen)):
        return replace(t, f=kids[0])
    return t


def gsubterms(t: Gentzen, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Gentzen]]:
    """Every subterm with its address, root first."""
    yield path, t
    for i, k in enumerate(t.kids):
        yield from gsubterms(k, path + (i,))


def height(t: Gentzen) -> int:
    return 1 + max((height(k) for k in t.kids), default=0)


def skeleton(t: Gentzen) -> tuple:
    """The node shape with indices forgotten and renaming nodes skipped;
    two terms are node-for-node analogous when their skeletons agree."""
    if isinstance(t, GRen):
        return skeleton(t.f)
    return (type(t).__name__,) + tuple(skeleton(k) for k in t.kids)


def is_cut_free(t: Gentzen) -> bool:
    return not any(isinstance(s, GCut) for _, s in gsubterms(t))


def is_renaming_free(t: Gentzen) -> bool:
    return not any(isinstance(s, GRen) for _, s in gsubterms(t))


def _type_vars(t: Gentzen) -> tuple[set[str], set[str]]:
    free: set[str] = set()
    bound: set[str] = set()
    for _, s in gsubterms(t):
        for a in (s.source, s.target):
            free |= a.free
            bound |= a.binders
    return free, bound


def is_variable_pure(t: Gentzen) -> bool:
    """No variable is free in the type of one subterm and bound in the
    type of another (or the same) subterm."""
    free, bound = _type_vars(t)
    return not (free & bound)


def term_vars(t: Gentzen) -> set[str]:
    """Every variable that participates in t or indexes one of its nodes."""
    out: set[str] = set()
    for _, s in gsubterms(t):
        out |= all_vars(s.source) | all_vars(s.target)
        if isinstance(s, _GQuant):
            out |= {s.var, s.idx}
        elif isinstance(s, GRen):
            out |= {s.x, s.y}
    return out


# --- denotation --------------------------------------------------------------------

def _iota(cls, x: str, body: Formula, y: str) -> Arrow:
    base = cls(x, body)
    if y == x or x not in body.free:
        return base
    return Ren(x, y, base)


def _opt_tensor(op: str, f: Arrow, ctx: Formula | None) -> Arrow:
    return f if ctx is None else Tensor(op, f, Id(ctx))


def denote(t: Gentzen) -> Arrow:
    """The arrow term a Gentzen term stands for, typed exactly by its
    canonical sequent."""
    return _denote(t)


def _denote(t: Gentzen) -> Arrow:
    src, tgt = t.sequent
    if isinstance(t, GId):
        return Id(t.p)
    if isinstance(t, GCut):
        f, g = _denote(t.f), _denote(t.g)
        x, z, y = t.x, t.ctx_z, t.ctx_y
        if z is None and y is None:
            return glue_chain(src, [f, g], tgt)
        if z is None:
            return glue_chain(src, [Tensor(AND, f, Id(y)), g], tgt)
        if y is None:
            return glue_chain(src, [f, Tensor(OR, g, Id(z))], tgt)
        return glue_chain(src, [Tensor(AND, f, Id(y)), Tensor(AND, CCheck(z, x), Id(y)),
                                d_right(z, x, y), CCheck(And_(x, y), z), Tensor(OR, g, Id(z))], tgt)
    if isinstance(t, GAnd):
        f, g = _denote(t.f), _denote(t.g)
        y1, y2 = t.y1, t.y2
        z1, z2 = t.ctx
        steps: list[Arrow] = [Tensor(AND, f, g)]
        if z1 is None and z2 is not None:
            steps.append(D(y1, y2, z2))
        elif z1 is not None and z2 is None:
            steps.append(d_right(z1, y1, y2))
        elif z1 is not None and z2 is not None:
            steps += [d_right(z1, y1, Or_(y2, z2)), Tensor(OR, Id(z1), D(y1, y2, z2))]
        return glue_chain(src, steps, tgt)
    if isinstance(t, GOr):
        f, g = _denote(t.f), _denote(t.g)
        x1, x2 = t.x1, t.x2
        u1, u2 = t.ctx
        steps = []
        if u1 is not None and u2 is None:
            steps.append(D(u1, x1, x2))
        elif u1 is None and u2 is not None:
            steps.append(d_right(x1, x2, u2))
        elif u1 is not None and u2 is not None:
            steps += [Tensor(AND, D(u1, x1, x2), Id(u2)), d_right(And_(u1, x1), x2, u2)]
        steps.append(Tensor(OR, f, g))
        return glue_chain(src, steps, tgt)
    if isinstance(t, GAllL):
        h = _opt_tensor(AND, _iota(IotaAll, t.var, t.body, t.idx), t.ctx)
        return glue_chain(src, [h, _denote(t.f)], tgt)
    if isinstance(t, GExR):
        h = _opt_tensor(OR, _iota(IotaEx, t.var, t.body, t.idx), t.ctx)
        return glue_chain(src, [_denote(t.f), h], tgt)
    if isinstance(t, GAllR):
        x, u, z = t.var, t.idx, t.ctx
        xu = t.instance
        inner = glue_chain(t.f.source, [_denote(t.f)], xu if z is None else Or_(xu, z))
        steps = [GammaAll(u, t.f.source), QArrow(ALL, u, inner)]
        if z is not None:
            steps.append(ThetaAll(u, xu, z))
        if u != x:
            steps.append(_opt_tensor(OR, tau_body(ALL, xu, u, x), z))
        return glue_chain(src, steps, tgt)
    if isinstance(t, GExL):
        x, u, z = t.var, t.idx, t.ctx
        xu = t.instance
        inner = glue_chain(xu if z is None else And_(xu, z), [_denote(t.f)], t.f.target)
        steps = []
        if u != x:
            steps.append(_opt_tensor(AND, tau_body(SOME, xu, u, x), z))
        if z is not None:
            steps.append(ThetaEx(u, xu, z))
        steps += [QArrow(SOME, u, inner), GammaEx(u, t.f.target)]
        return glue_chain(src, steps, tgt)
    if isinstance(t, GRen):
        return glue_chain(src, [Ren(t.x, t.y, _denote(t.f))], tgt)
    if isinstance(t, GMix):
        f, g = _denote(t.f), _denote(t.g)
        return glue_chain(src, [Mix(t.f.source, t.g.source), Tensor(OR, f, g)], tgt)
    raise TypeError(f"not a Gentzen term: {t!r}")


def And_(a: Formula, b: Formula) -> Formula:
    return Bin(AND, a, b)


def Or_(a: Formula, b: Formula) -> Formula:
    return Bin(OR, a, b)


def denote_as(t: Gentzen, src: Formula, tgt: Formula) -> Arrow:
    """The denotation shuffled to the given endpoints, which must belong to
    the form sets of t's sequent."""
    return glue_chain(src, [denote(t)], tgt)


# --- Gentzenization -------------------------------------------------------------

def identity_term(a: Formula) -> Gentzen:
    """The Gentzen term for the identity on the form set a, expanded down
    to atomic identities."""
    a = canon(a)
    if isinstance(a, Atom):
        return GId(a)
    if isinstance(a, Bin):
        head, rest = a.left, a.right
        cls = GAnd if a.op == AND else GOr
        return cls(head, rest, identity_term(head), identity_term(rest))
    if isinstance(a, Quant):
        x, b = a.var, a.body
        if a.q == ALL:
            return GAllR(x, b, x, GAllL(x, b, x, identity_term(b)))
        return GExL(x, b, x, GExR(x, b, x, identity_term(b)))
    raise SystemViolation(f"form sets are negation-free: {a}")


def gentzenize(f: Arrow) -> Gentzen:
    """A Gentzen term whose denotation has the graph of f; its sequent is
    the pair of form sets of f's type.  Every type in f must be
    diversified."""
    for s in subterms(f):
        for side in (s.source, s.target):
            if not is_diversified(side):
                raise NotDiversified(f"not diversified: {side}")
    return _gz(f)


def _gz(t: Arrow) -> Gentzen:
    if isinstance(t, (Id, BHat, BCheck, CHat, CCheck)):
        return identity_term(t.source)
    if isinstance(t, D):
        return GOr(canon(t.b), canon(t.c), identity_term(And_(t.b, t.a)), identity_term(t.c))
    if isinstance(t, IotaAll):
        b = canon(t.a)
        return GAllL(t.x, b, t.x, identity_term(b))
    if isinstance(t, IotaEx):
        b = canon(t.a)
        return GExR(t.x, b, t.x, identity_term(b))
    if isinstance(t, GammaAll):
        b = canon(t.d)
        return GAllR(t.x, b, t.x, identity_term(b))
    if isinstance(t, GammaEx):
        b = canon(t.d)
        return GExL(t.x, b, t.x, identity_term(b))
    if isinstance(t, ThetaAll):
        t.type
        both = canon(Or_(t.a, t.d))
        return GAllR(t.x, canon(t.a), t.x, GAllL(t.x, both, t.x, identity_term(both)))
    if isinstance(t, ThetaEx):
        t.type
        both = canon(And_(t.a, t.d))
        return GExL(t.x, canon(t.a), t.x, GExR(t.x, both, t.x, identity_term(both)))
    if isinstance(t, Mix):
        return GMix(identity_term(t.a), identity_term(t.b))
    if isinstance(t, Comp):
        return GCut(canon(t.f.target), _gz(t.f), _gz(t.g))
    if isinstance(t, Tensor):
        f, g = _gz(t.f), _gz(t.g)
        if t.op == AND:
            return GAnd(f.target, g.target, f, g)
        return GOr(f.source, g.source, f, g)
    if isinstance(t, QArrow):
        f = _gz(t.f)
        a, b = f.source, f.target
        if t.q == ALL:
            return GAllR(t.x, b, t.x, GAllL(t.x, a, t.x, f))
        return GExL(t.x, a, t.x, GExR(t.x, b, t.x, f))
    if isinstance(t, Ren):
        return GRen(t.x, t.y, _gz(t.f))
    if isinstance(t, (DeltaAll, SigmaEx)):
        raise SystemViolation("Gentzen terms cover the systems without negation only")
    raise TypeError(f"not an arrow term: {t!r}")


# --- variable purification ---------------------------------------------------------

def _rename_formula(a: Formula, mapping: dict[str, str]) -> Formula:
    return canon(rename_bound(a, mapping))


def _alpha(a: Formula, mapping: dict[str, str]) -> Arrow:
    """a |- a with its binders renamed through mapping, built from tau
    arrows under tensors and quantifiers."""
    if isinstance(a, Atom):
        return Id(a)
    if isinstance(a, Bin):
        return Tensor(a.op, _alpha(a.left, mapping), _alpha(a.right, mapping))
    if isinstance(a, Quant):
        inner = _alpha(a.body, mapping)
        body2 = inner.target
        x, x2 = a.var, mapping.get(a.var, a.var)
        under = QArrow(a.q, x, inner)
        if x2 == x:
            return under
        if a.q == ALL:
            tau = tau_body(ALL, body2, x, x2)
        else:
            tau = tau_body(SOME, _inst(body2, x, x2), x2, x)
        return seq(tau, under)
    raise SystemViolation(f"form sets are negation-free: {a}")


def _rename_term(t: Gentzen, mapping: dict[str, str]) -> Gentzen:
    """Rename every binder through mapping, in form-set indices and in the
    bound variable of quantifier rules."""
    if isinstance(t, GId):
        return t
    kids = [_rename_term(k, mapping) for k in t.kids]
    if isinstance(t, GCut):
        return GCut(_rename_formula(t.x, mapping), *kids)
    if isinstance(t, GAnd):
        return GAnd(_rename_formula(t.y1, mapping), _rename_formula(t.y2, mapping), *kids)
    if isinstance(t, GOr):
        return GOr(_rename_formula(t.x1, mapping), _rename_formula(t.x2, mapping), *kids)
    if isinstance(t, _GQuant):
        principal = _rename_formula(t.principal, mapping)
        return type(t)(principal.var, principal.body, t.idx, kids[0])
    return with_kids(t, *kids)


def purify(t: Gentzen, fresh: Fresh | None = None) -> tuple[Arrow, Gentzen, Arrow]:
    """(h2, core, h1) with core variable-pure and h2 . denote(core) . h1
    typed like t and equal to its denotation.  Every variable bound
    anywhere in t is replaced in binders by a gensym-fresh one."""
    src, tgt = t.sequent
    if is_variable_pure(t):
        return Id(tgt), t, Id(src)
    fresh = fresh or Fresh(term_vars(t))
    fresh.reserve(term_vars(t))
    _, bound = _type_vars(t)
    mapping = {x: fresh.var() for x in sorted(bound)}
    core = _rename_term(t, mapping)
    inverse = {v: k for k, v in mapping.items()}
    h1 = glue_chain(src, [_alpha(src, mapping)], core.source)
    tgt2 = rename_bound(tgt, mapping)
    h2 = glue_chain(core.target, [_alpha(tgt2, inverse)], tgt)
    return h2, core, h1


# --- renaming elimination -------------------------------------------------------

def push_rename(x: str, y: str, t: Gentzen, fresh: Fresh) -> Gentzen:
    """A renaming-free term standing for [t]^x_y, node for node like t.
    t must be renaming-free and cut-free; y must not be bound anywhere in
    t (variable purity guarantees this whenever the renaming is
    applicable)."""
    if x == y or (x not in t.source.free and x not in t.target.free):
        return t
    if isinstance(t, GId):
        return GId(_inst(t.p, x, y))
    if isinstance(t, (GAnd, GOr)):
        a, b = (t.y1, t.y2) if isinstance(t, GAnd) else (t.x1, t.x2)
        return type(t)(canon(_inst(a, x, y)), canon(_inst(b, x, y)),
                       push_rename(x, y, t.f, fresh), push_rename(x, y, t.g, fresh))
    if isinstance(t, GMix):
        return GMix(push_rename(x, y, t.f, fresh), push_rename(x, y, t.g, fresh))
    if isinstance(t, _GQuant):
        f = t.f
        idx = t.idx
        if t.eigen and idx == y:
            new = fresh.var()
            f = push_rename(idx, new, f, fresh)
            idx = new
        principal = canon(_inst(t.principal, x, y))
        if not t.eigen and idx == x:
            idx = y
        return type(t)(principal.var, principal.body, idx, push_rename(x, y, f, fresh))
    if isinstance(t, GCut):
        raise HasCut("renaming elimination needs a cut-free term")
    if isinstance(t, GRen):
        return push_rename(x, y, push_rename(t.x, t.y, t.f, fresh), fresh)
    raise TypeError(f"not a Gentzen term: {t!r}")


def eliminate_renaming(t: Gentzen, fresh: Fresh | None = None) -> Gentzen:
    """A renaming-free term with the sequent and graph of t, node for node
    analogous to t with the renaming nodes removed."""
    if not is_variable_pure(t):
        raise NotVariablePure("renaming elimination needs a variable-pure term")
    if not is_cut_free(t):
        raise HasCut("renaming elimination needs a cut-free term")
    fresh = fresh or Fresh(term_vars(t))
    return _elim_ren(t, fresh)


def _elim_ren(t: Gentzen, fresh: Fresh) -> Gentzen:
    kids = [_elim_ren(k, fresh) for k in t.kids]
    if isinstance(t, GRen):
        return push_rename(t.x, t.y, kids[0], fresh)
    return with_kids(t, *kids) if kids else t


# --- cut elimination ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CutMeasure:
    """Lexicographic complexity of a topmost cut: m counts the letters and
    quantifier prefixes of the cut form set, n is the sum of the heights
    of the two premises."""
    m: int
    n: int


def _quantifiers(a: Formula) -> int:
    if isinstance(a, Quant):
        return 1 + _quantifiers(a.body)
    if isinstance(a, Bin):
        return _quantifiers(a.left) + _quantifiers(a.right)
    if isinstance(a, Neg):
        return _quantifiers(a.body)
    return 0


def cut_measure(x: Formula, f: Gentzen, g: Gentzen) -> CutMeasure:
    return CutMeasure(count_atoms(x) + _quantifiers(x), height(f) + height(g))


@dataclass
class _CutRun:
    fresh: Fresh
    trace: list[tuple[CutMeasure, CutMeasure]] = field(default_factory=list)


def eliminate_cut(t: Gentzen, trace: list | None = None, fresh: Fresh | None = None) -> Gentzen:
    """A cut-free and renaming-free term with the sequent and graph of t.
    When trace is a list, every reduction step appends (parent measure,
    child measure) to it; each child is checked to be strictly smaller."""
    if not is_variable_pure(t):
        raise NotVariablePure("cut elimination needs a variable-pure term")
    run = _CutRun(fresh or Fresh(term_vars(t)))
    run.fresh.reserve(term_vars(t))
    out = _elim_cut(t, run)
    if trace is not None:
        trace.extend(run.trace)
    return out


def _elim_cut(t: Gentzen, run: _CutRun) -> Gentzen:
    kids = [_elim_cut(k, run) for k in t.kids]
    if isinstance(t, GRen):
        return push_rename(t.x, t.y, kids[0], run.fresh)
    if isinstance(t, GCut):
        return _cut(t.x, kids[0], kids[1], run, None)
    return with_kids(t, *kids) if kids else t


def _is_principal_right(f: Gentzen, x: Formula) -> bool:
    """f introduces x on its right-hand side by its last rule."""
    if isinstance(f, GId):
        return f.p == x
    if isinstance(f, GAnd):
        return f.principal == x
    if isinstance(f, (GAllR, GExR)):
        return f.principal == x
    return False


def _is_principal_left(g: Gentzen, x: Formula) -> bool:
    if isinstance(g, GId):
        return g.p == x
    if isinstance(g, GOr):
        return g.principal == x
    if isinstance(g, (GAllL, GExL)):
        return g.principal == x
    return False


def _cut(x: Formula, f: Gentzen, g: Gentzen, run: _CutRun, parent: CutMeasure | None) -> Gentzen:
    """The cut of cut-free f and g on x, reduced away."""
    here = cut_measure(x, f, g)
    if parent is not None:
        if not here < parent:
            raise AssertionError(f"cut measure did not decrease: {parent} -> {here}")
        run.trace.append((parent, here))

    def sub(x2: Formula, f2: Gentzen, g2: Gentzen) -> Gentzen:
        return _cut(x2, f2, g2, run, here)

    if isinstance(f, GId):
        return g
    if isinstance(g, GId):
        return f
    pf, pg = _is_principal_right(f, x), _is_principal_left(g, x)
    if isinstance(x, Bin) and x.op == AND and pf:
        assert isinstance(f, GAnd)
        return sub(f.y1, f.f, sub(f.y2, f.g, g))
    if isinstance(x, Bin) and x.op == OR and pg:
        assert isinstance(g, GOr)
        return sub(g.x2, sub(g.x1, f, g.f), g.g)
    if isinstance(x, Quant) and pf and pg:
        if x.q == ALL:
            assert isinstance(f, GAllR) and isinstance(g, GAllL)
            y = g.idx
            f1 = push_rename(f.idx, y, f.f, run.fresh)
            return sub(canon(g.instance), f1, g.f)
        assert isinstance(f, GExR) and isinstance(g, GExL)
        y = f.idx
        g1 = push_rename(g.idx, y, g.f, run.fresh)
        return sub(canon(f.instance), f.f, g1)
    into_f = not pf and not (isinstance(x, Bin) and x.op == OR)
    if into_f:
        return _push_into_left(x, f, g, sub, run)
    return _push_into_right(x, f, g, sub, run)


def _fresh_eigen(t: _GQuant, other: Gentzen, run: _CutRun) -> tuple[str, Gentzen]:
    """The eigenvariable of t, renamed when it is free in the other
    premise's type."""
    u, f = t.idx, t.f
    if u in other.source.free or u in other.target.free:
        new = run.fresh.var()
        return new, push_rename(u, new, f, run.fresh)
    return u, f


def _push_into_left(x, f, g, sub, run) -> Gentzen:
    """The cut formula is a side formula of f; move the cut into the
    premise of f that carries it."""
    if isinstance(f, GAnd):
        if contains(f.f.target, x, OR):
            return GAnd(f.y1, f.y2, sub(x, f.f, g), f.g)
        return GAnd(f.y1, f.y2, f.f, sub(x, f.g, g))
    if isinstance(f, GOr):
        if contains(f.f.target, x, OR):
            return GOr(f.x1, f.x2, sub(x, f.f, g), f.g)
        return GOr(f.x1, f.x2, f.f, sub(x, f.g, g))
    if isinstance(f, GMix):
        if contains(f.f.target, x, OR):
            return GMix(sub(x, f.f, g), f.g)
        return GMix(f.f, sub(x, f.g, g))
    if isinstance(f, _GQuant):
        if f.eigen:
            u, f1 = _fresh_eigen(f, g, run)
        else:
            u, f1 = f.idx, f.f
        return type(f)(f.var, f.body, u, sub(x, f1, g))
    raise AssertionError(f"cannot move a cut into {type(f).__name__}")


def _push_into_right(x, f, g, sub, run) -> Gentzen:
    if isinstance(g, GAnd):
        if contains(g.f.source, x, AND):
            return GAnd(g.y1, g.y2, sub(x, f, g.f), g.g)
        return GAnd(g.y1, g.y2, g.f, sub(x, f, g.g))
    if isinstance(g, GOr):
        if contains(g.f.source, x, AND):
            return GOr(g.x1, g.x2, sub(x, f, g.f), g.g)
        return GOr(g.x1, g.x2, g.f, sub(x, f, g.g))
    if isinstance(g, GMix):
        if contains(g.f.source, x, AND):
            return GMix(sub(x, f, g.f), g.g)
        return GMix(g.f, sub(x, f, g.g))
    if isinstance(g, _GQuant):
        if g.eigen:
            u, g1 = _fresh_eigen(g, f, run)
        else:
            u, g1 = g.idx, g.f
        return type(g)(g.var, g.body, u, sub(x, f, g1))
    raise AssertionError(f"cannot move a cut into {type(g).__name__}")


# --- clusters ------------------------------------------------------------------------

FREE, UNIV, EXIST = "∅", "∀", "∃"


@dataclass(frozen=True)
class VarOcc:
    """A variable occurrence in one side of a sequent: the variable, the
    id of the quantifier occurrence binding it (None when free) and that
    quantifier."""
    var: str
    binder: int | None
    q: str | None

    @property
    def mark(self) -> str:
        return FREE if self.q is None else (UNIV if self.q == ALL else EXIST)


@dataclass(frozen=True)
class Couple:
    letter: str
    place: int
    left: VarOcc
    right: VarOcc

    @property
    def name(self) -> str:
        return f"{self.letter}{self.place}"

    @property
    def kind(self) -> tuple[str, str]:
        return (self.left.mark, self.right.mark)


def _occurrences(a: Formula) -> dict[tuple[str, int], VarOcc]:
    out: dict[tuple[str, int], VarOcc] = {}
    counter = itertools.count()

    def walk(b: Formula, env: dict[str, tuple[int, str]]) -> None:
        if isinstance(b, Atom):
            for j, v in enumerate(b.args, 1):
                binder, q = env.get(v, (None, None))
                out[(b.pred, j)] = VarOcc(v, binder, q)
        elif isinstance(b, Bin):
            walk(b.left, env)
            walk(b.right, env)
        elif isinstance(b, Quant):
            inner = dict(env)
            inner[b.var] = (next(counter), b.q)
            walk(b.body, inner)
        elif isinstance(b, Neg):
            walk(b.body, env)

    walk(a, {})
    return out


def couples_of(src: Formula, tgt: Formula) -> list[Couple]:
    left, right = _occurrences(src), _occurrences(tgt)
    return [Couple(p, j, left[(p, j)], right[(p, j)]) for (p, j) in sorted(left) if (p, j) in right]


@dataclass
class ClusterReport:
    couples: list[Couple]
    bridges: list[tuple[str, int, list[int]]]
    clusters: list[list[int]]
    arcs: dict[tuple[str, int], list[tuple[tuple[int, ...], Couple]]]
    gates: list[list[tuple[int, ...]]]
    eigengates: list[list[tuple[int, ...]]]
    free_vars: list[set[str]]

    def cluster_names(self) -> list[set[str]]:
        return [{self.couples[i].name for i in c} for c in self.clusters]

    def cluster_of(self, name: str) -> int:
        for k, c in enumerate(self.clusters):
            if any(self.couples[i].name == name for i in c):
                return k
        raise KeyError(name)


def _placed(body: Formula, x: str) -> list[tuple[str, int]]:
    """The argument places of body where x occurs free."""
    return [(p, j) for (p, j), occ in _occurrences(body).items() if occ.var == x and occ.binder is None]


def compute_clusters(t: Gentzen) -> ClusterReport:
    """Couples, bridges, clusters, arcs and gates of a variable-pure,
    cut-free and renaming-free term."""
    if not is_variable_pure(t):
        raise NotVariablePure("cluster analysis needs a variable-pure term")
    if not is_cut_free(t):
        raise HasCut("cluster analysis needs a cut-free term")
    if not is_renaming_free(t):
        raise PreconditionError("cluster analysis needs a renaming-free term")
    couples = couples_of(t.source, t.target)
    parent = list(range(len(couples)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    bridges: list[tuple[str, int, list[int]]] = []
    for side in ("left", "right"):
        groups: dict[int, list[int]] = {}
        for i, c in enumerate(couples):
            occ = getattr(c, side)
            if occ.binder is not None:
                groups.setdefault(occ.binder, []).append(i)
        for binder, members in sorted(groups.items()):
            if len(members) > 1:
                bridges.append((side, binder, members))
                for i in members[1:]:
                    parent[find(i)] = find(members[0])
    roots: dict[int, list[int]] = {}
    for i in range(len(couples)):
        roots.setdefault(find(i), []).append(i)
    clusters = sorted(roots.values())
    where = {couples[i].name: k for k, c in enumerate(clusters) for i in c}
    by_place = {(c.letter, c.place): c.name for c in couples}

    arcs: dict[tuple[str, int], list[tuple[tuple[int, ...], Couple]]] = {
        (c.letter, c.place): [] for c in couples}
    gates: list[list[tuple[int, ...]]] = [[] for _ in clusters]
    eigengates: list[list[tuple[int, ...]]] = [[] for _ in clusters]
    for path, s in gsubterms(t):
        for c in couples_of(s.source, s.target):
            if (c.letter, c.place) in arcs:
                arcs[(c.letter, c.place)].append((path, c))
        if isinstance(s, _GQuant) and s.var in s.body.free:
            hit = {where[by_place[pl]] for pl in _placed(s.body, s.var) if pl in by_place}
            for k in sorted(hit):
                gates[k].append(path)
                if s.eigen:
                    eigengates[k].append(path)
    free_vars: list[set[str]] = []
    for c in clusters:
        vs: set[str] = set()
        for i in c:
            for _, cp in arcs[(couples[i].letter, couples[i].place)]:
                for occ in (cp.left, cp.right):
                    if occ.binder is None:
                        vs.add(occ.var)
        free_vars.append(vs)
    return ClusterReport(couples, bridges, clusters, arcs, gates, eigengates, free_vars)


def is_eigendiversified(t: Gentzen) -> bool:
    """Variable-pure, cut-free, renaming-free, and the free variable of
    every arc-cluster with an eigengate belongs to no other arc-cluster."""
    if not (is_variable_pure(t) and is_cut_free(t) and is_renaming_free(t)):
        return False
    rep = compute_clusters(t)
    for k, eg in enumerate(rep.eigengates):
        if not eg:
            continue
        for j, other in enumerate(rep.free_vars):
            if j != k and rep.free_vars[k] & other:
                return False
    return True


def eigendiversify(t: Gentzen, fresh: Fresh | None = None) -> Gentzen:
    """An eigendiversified term with the sequent and graph of t, differing
    from t only in indices: the eigenvariable of every eigengate is
    replaced by its own fresh variable."""
    rep = compute_clusters(t)
    if is_eigendiversified(t):
        return t
    gate_paths = {p for eg in rep.eigengates for p in eg}
    fresh = fresh or Fresh(term_vars(t))
    fresh.reserve(term_vars(t))

    def walk(s: Gentzen, path: tuple[int, ...]) -> Gentzen:
        if isinstance(s, _GQuant) and s.eigen and path in gate_paths:
            new = fresh.var()
            body = push_rename(s.idx, new, s.f, fresh)
            return type(s)(s.var, s.body, new, walk(body, path + (0,)))
        kids = [walk(k, path + (i,)) for i, k in enumerate(s.kids)]
        return with_kids(s, *kids) if kids else s

    return walk(t, ())


# --- invertibility of the eigenvariable rules ---------------------------------

def invert_right(t: Gentzen, rule: str = "allR", fresh: Fresh | None = None) -> Gentzen:
    """For t : U |- all x.X | Z (rule 'allR') a term f' : U |- X[u/x] | Z
    with allR of f' equal to t; for t : some x.X & Z |- W (rule 'exL') the
    dual.  The principal formula is the first member of the right kind."""
    if rule not in ("allR", "exL"):
        raise ValueError("rule must be 'allR' or 'exL'")
    q, op, side = (ALL, OR, t.target) if rule == "allR" else (SOME, AND, t.source)
    cand = [c for c in comps(side, op) if isinstance(c, Quant) and c.q == q]
    if not cand:
        raise TargetShapeMismatch(f"no {'universal' if q == ALL else 'existential'} member in {side}")
    cls = GAllR if rule == "allR" else GExL
    if isinstance(t, cls) and t.principal in cand:
        return t.f
    principal = cand[0]
    x, body = principal.var, principal.body
    ctx = minus(side, principal, op)
    fresh = fresh or Fresh(term_vars(t))
    fresh.reserve(term_vars(t))
    u = fresh.var()
    inst = _inst(body, x, u)
    if rule == "allR":
        out = Bin(OR, inst, ctx) if ctx is not None else inst
        arrow = glue_chain(t.source, [denote(t), _opt_tensor(OR, _iota(IotaAll, x, body, u), ctx)], out)
    else:
        src = Bin(AND, inst, ctx) if ctx is not None else inst
        arrow = glue_chain(src, [_opt_tensor(AND, _iota(IotaEx, x, body, u), ctx), denote(t)], t.target)
    return gentzenize(arrow)


# --- development ------------------------------------------------------------------

_PRIMS = (Id, BHat, BCheck, CHat, CCheck, D, IotaAll, IotaEx, GammaAll, GammaEx, ThetaAll,
          ThetaEx, DeltaAll, SigmaEx, Mix)


def map_formulas(t: Arrow, fn: Callable[[Formula], Formula]) -> Arrow:
    """t with fn applied to every formula index of every node."""
    if isinstance(t, Comp):
        return Comp(map_formulas(t.g, fn), map_formulas(t.f, fn))
    if isinstance(t, Tensor):
        return Tensor(t.op, map_formulas(t.f, fn), map_formulas(t.g, fn))
    if isinstance(t, (QArrow, Ren)):
        return replace(t, f=map_formulas(t.f, fn))
    changes = {fl.name: fn(getattr(t, fl.name)) for fl in fields(t)
               if isinstance(getattr(t, fl.name), Formula)}
    return replace(t, **changes)


def diversify_arrow(t: Arrow) -> tuple[Arrow, dict[str, str]]:
    """A diversified term of which t is a letter-for-letter substitution
    instance, with the map from its letters back to t's letters."""
    counter = itertools.count(1)
    origin: dict[str, str] = {}

    def fresh_atoms(a: Formula) -> Formula:
        def new(at: Atom) -> Atom:
            name = f"L{next(counter)}"
            origin[name] = at.pred
            return Atom(name, at.args)
        return map_atoms(a, new)

    def relabel(s: Arrow, ren: dict[str, str]) -> Arrow:
        return map_formulas(s, lambda a: map_atoms(a, lambda at: Atom(ren.get(at.pred, at.pred), at.args)))

    def walk(s: Arrow) -> Arrow:
        if isinstance(s, Comp):
            f, g = walk(s.f), walk(s.g)
            ren = {a.pred: b.pred for a, b in zip(_atoms(g.source), _atoms(f.target))}
            return Comp(relabel(g, ren), f)
        if isinstance(s, Tensor):
            return Tensor(s.op, walk(s.f), walk(s.g))
        if isinstance(s, (QArrow, Ren)):
            return replace(s, f=walk(s.f))
        if isinstance(s, (DeltaAll, SigmaEx)):
            raise SystemViolation("diversification covers the systems without negation only")
        return map_formulas(s, fresh_atoms)

    return walk(t), origin


def _atoms(a: Formula) -> list[Atom]:
    if isinstance(a, Atom):
        return [a]
    if isinstance(a, (Quant, Neg)):
        return _atoms(a.body)
    return _atoms(a.left) + _atoms(a.right)


class _Blocked(Exception):
    pass


def _factors(t: Arrow) -> list[Arrow]:
    """Composition-free factors of t, first applied first; identity
    factors are dropped."""
    if isinstance(t, Comp):
        return _factors(t.f) + _factors(t.g)
    if isinstance(t, Tensor):
        fs, gs = _factors(t.f), _factors(t.g)
        a, b2 = t.f.source, t.g.target
        return ([Tensor(t.op, Id(a), g) for g in gs] + [Tensor(t.op, f, Id(b2)) for f in fs])
    if isinstance(t, QArrow):
        return [QArrow(t.q, t.x, f) for f in _factors(t.f)]
    if isinstance(t, Ren):
        out = []
        for f in _factors(t.f):
            r = Ren(t.x, t.y, f)
            try:
                r.type
            except UndefinedSubstitution:
                raise _Blocked from None
            out.append(r)
        return out
    if isinstance(t, Id):
        return []
    return [t]


def _refine(t: Arrow) -> Arrow:
    """Move renamings of a factor inward until each wraps an iota arrow
    whose bound variable is renamed, or disappears."""
    if isinstance(t, Tensor):
        return Tensor(t.op, _refine(t.f), _refine(t.g))
    if isinstance(t, QArrow):
        return QArrow(t.q, t.x, _refine(t.f))
    if isinstance(t, Ren):
        return _ren_in(t.x, t.y, _refine(t.f))
    return t


def _ren_in(x: str, y: str, t: Arrow) -> Arrow:
    whole = Ren(x, y, t)
    typ = whole.type
    if typ == t.type:
        return t
    if isinstance(t, Tensor):
        return Tensor(t.op, _ren_in(x, y, t.f), _ren_in(x, y, t.g))
    if isinstance(t, QArrow) and t.x not in (x, y):
        return QArrow(t.q, t.x, _ren_in(x, y, t.f))
    if isinstance(t, Ren):
        return whole
    if isinstance(t, _PRIMS):
        try:
            cand = map_formulas(t, lambda a: _inst(a, x, y))
            if cand.type == typ:
                return cand
        except KernelError:
            pass
    return whole


def is_one_term(t: Arrow) -> bool:
    if isinstance(t, Id):
        return True
    if isinstance(t, Tensor):
        return is_one_term(t.f) and is_one_term(t.g)
    if isinstance(t, (QArrow, Ren)):
        return is_one_term(t.f)
    return False


def is_headed(t: Arrow) -> bool:
    """Exactly one primitive other than an identity, reached through
    tensors with identity-term siblings, quantifiers and renamings."""
    if isinstance(t, Tensor):
        return ((is_headed(t.f) and is_one_term(t.g)) or (is_one_term(t.f) and is_headed(t.g)))
    if isinstance(t, (QArrow, Ren)):
        return is_headed(t.f)
    return isinstance(t, _PRIMS) and not isinstance(t, Id)


def _factor_list(t: Arrow) -> list[Arrow]:
    out = []
    while isinstance(t, Comp):
        out.append(t.g)
        t = t.f
    out.append(t)
    return out[::-1]


def is_developed(t: Arrow) -> bool:
    """f_n . ... . f_1 with f_1 an identity term and every other factor
    headed."""
    fs = _factor_list(t)
    if any(isinstance(f, Comp) or any(isinstance(s, Comp) for s in subterms(f)) for f in fs):
        return False
    return is_one_term(fs[0]) and all(is_headed(f) for f in fs[1:])


def _assemble(src: Formula, factors: list[Arrow]) -> Arrow:
    if not factors:
        return Id(src)
    return compose(*reversed(factors), Id(src))


def develop(f: Arrow, system: System | str = System.QMDS) -> Arrow:
    """A developed term with the type and graph of f: an identity factor
    followed by headed factors, with renaming left only around iota
    arrows that rename their own bound variable."""
    typecheck(f, system)
    try:
        factors = _factors(f)
    except _Blocked:
        factors = _factors(_gentzen_route(f))
    factors = [_refine(h) for h in factors]
    factors = [h for h in factors if not is_identity(h) and not is_one_term(h)]
    return _assemble(f.source, factors)


def _gentzen_route(f: Arrow) -> Arrow:
    """Renaming that cannot be distributed over a composition is removed
    by normalizing a diversified copy of f through Gentzen terms."""
    div, origin = diversify_arrow(f)
    gt = gentzenize(div)
    fresh = Fresh(term_vars(gt))
    h2, core, h1 = purify(gt, fresh)
    normal = eliminate_cut(core, fresh=fresh)
    body = compose(shuffle(gt.target, div.target), h2, denote(normal), h1, shuffle(div.source, gt.source))
    back = map_formulas(body, lambda a: map_atoms(a, lambda at: Atom(origin.get(at.pred, at.pred), at.args)))
    return back


# --- s-expressions ----------------------------------------------------------------

_QNAMES = {GAllL: "allL", GAllR: "allR", GExL: "exL", GExR: "exR"}
_QCLASSES = {v: k for k, v in _QNAMES.items()}


def _fb(a: Formula) -> str:
    return "{" + print_formula(a) + "}"


def _infer_idx(cls, var: str, body: Formula, f: Gentzen) -> str:
    """The witness or eigenvariable that makes the premise of f fit."""
    left = cls in (GAllL, GExL)
    side = f.source if left else f.target
    op = AND if left else OR
    if var not in body.free:
        cands = [var] + sorted(all_vars(f.source) | all_vars(f.target))
        if cls in (GAllR, GExL):
            bad = f.source.free | f.target.free
            for c in cands:
                if c not in bad:
                    return c
            return Fresh(bad | set(cands)).var()
        return var
    places = _placed(body, var)
    occ = _occurrences(side)
    names = {occ[pl].var for pl in places if pl in occ}
    for c in sorted(names) + [var]:
        inst = subst(body, var, c)
        if inst is not None and contains(side, canon(inst), op):
            return c
    raise TypeMismatch(f"no instance of {print_formula(body)} in {print_formula(side)}")


def print_gentzen(t: Gentzen) -> str:
    if isinstance(t, GId):
        return f"(gid {_fb(t.p)})"
    if isinstance(t, GCut):
        return f"(cut {_fb(t.x)} {print_gentzen(t.f)} {print_gentzen(t.g)})"
    if isinstance(t, GAnd):
        return f"(gand {_fb(t.y1)} {_fb(t.y2)} {print_gentzen(t.f)} {print_gentzen(t.g)})"
    if isinstance(t, GOr):
        return f"(gor {_fb(t.x1)} {_fb(t.x2)} {print_gentzen(t.f)} {print_gentzen(t.g)})"
    if isinstance(t, _GQuant):
        head = _QNAMES[type(t)]
        try:
            implicit = _infer_idx(type(t), t.var, t.body, t.f) == t.idx
        except KernelError:
            implicit = False
        idx = "" if implicit else f" {t.idx}"
        return f"({head} {t.var} {_fb(t.body)}{idx} {print_gentzen(t.f)})"
    if isinstance(t, GRen):
        return f"(gren {t.x} {t.y} {print_gentzen(t.f)})"
    if isinstance(t, GMix):
        return f"(gmix {print_gentzen(t.f)} {print_gentzen(t.g)})"
    raise TypeError(f"not a Gentzen term: {t!r}")


def parse_gentzen(text: str, arities: dict[str, int] | None = None) -> Gentzen:
    """Read the s-expression syntax; witnesses and eigenvariables may be
    omitted and are then inferred from the premise."""
    from .sexpr import Braced, _Reader, read_sexpr
    reader = _Reader(arities)

    def form(s) -> Formula:
        return canon(reader.formula(s))

    def term(s) -> Gentzen:
        if not isinstance(s, list) or not s or isinstance(s[0], (list, Braced)):
            raise ParseError(f"expected a Gentzen term, got {s!r}")
        head, args = s[0], s[1:]

        def need(*ns: int) -> None:
            if len(args) not in ns:
                raise ParseError(f"({head} ...) takes {' or '.join(map(str, ns))} arguments")

        if head == "gid":
            need(1)
            a = form(args[0])
            if not isinstance(a, Atom):
                raise TypeMismatch("gid takes an atomic form set")
            return GId(a)
        if head == "cut":
            need(3)
            return GCut(form(args[0]), term(args[1]), term(args[2]))
        if head in ("gand", "gor"):
            need(4)
            cls = GAnd if head == "gand" else GOr
            return cls(form(args[0]), form(args[1]), term(args[2]), term(args[3]))
        if head in _QCLASSES:
            need(3, 4)
            cls = _QCLASSES[head]
            var, body = reader.var(args[0]), form(args[1])
            f = term(args[-1])
            idx = reader.var(args[2]) if len(args) == 4 else _infer_idx(cls, var, body, f)
            return cls(var, body, idx, f)
        if head == "gren":
            need(3)
            return GRen(reader.var(args[0]), reader.var(args[1]), term(args[2]))
        if head == "gmix":
            need(2)
            return GMix(term(args[0]), term(args[1]))
        raise ParseError(f"unknown Gentzen constructor {head!r}")

    t = term(read_sexpr(text))
    t.sequent
    for _, s in gsubterms(t):
        s.sequent
    return t


Term = Union[Gentzen, Arrow]
