"""Arrow terms, their typing judgement and the derived arrows built from
primitives.

Every node is an immutable dataclass.  The type of a node is computed on
first access and cached; ill-typed nodes raise when their type is asked
for, not when they are built, so a term can be assembled first and
checked later against a system with :func:`typecheck`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .errors import ProvisoViolation, SystemViolation, TypeMismatch, UndefinedSubstitution
from .lang import (
    ALL, AND, OR, SOME, Atom, Bin, Formula, Neg, Quant, System, All, And, Ex, Or,
    check_system, free_var_sequence, print_formula, subst,
)

FWD = "+"
BWD = "-"


class Sequent(NamedTuple):
    source: Formula
    target: Formula

    def __str__(self) -> str:
        return f"{print_formula(self.source)} |- {print_formula(self.target)}"


def crown_all(b: Formula) -> Formula:
    """The universal closure of the excluded-middle disjunction on b."""
    c: Formula = Or(Neg(b), b)
    for x in free_var_sequence(b):
        c = All(x, c)
    return c


def crown_ex(b: Formula) -> Formula:
    c: Formula = And(b, Neg(b))
    for x in free_var_sequence(b):
        c = Ex(x, c)
    return c


def prefix(q: str, xs: list[str], b: Formula) -> Formula:
    """Q x_n ... Q x_1 b for xs = [x_1, ..., x_n]."""
    for x in xs:
        b = Quant(q, x, b)
    return b


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ProvisoViolation(msg)


def _split(f: Formula, op: str, what: str) -> tuple[Formula, Formula]:
    if not isinstance(f, Bin) or f.op != op:
        raise TypeMismatch(f"{what}: expected a {op}-formula, got {f}")
    return f.left, f.right


class Arrow:
    """Base class of arrow-term nodes."""

    __slots__ = ()

    @property
    def source(self) -> Formula:
        return self.type.source

    @property
    def target(self) -> Formula:
        return self.type.target

    def __str__(self) -> str:
        from .sexpr import print_arrow
        return print_arrow(self)


# --- primitives ----------------------------------------------------------------

@dataclass(frozen=True)
class Id(Arrow):
    a: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(self.a, self.a)


@dataclass(frozen=True)
class BHat(Arrow):
    """Conjunctive associativity; direction '+' regroups to the left."""
    dir: str
    a: Formula
    b: Formula
    c: Formula

    @cached_property
    def type(self) -> Sequent:
        right = And(self.a, And(self.b, self.c))
        left = And(And(self.a, self.b), self.c)
        return Sequent(right, left) if self.dir == FWD else Sequent(left, right)


@dataclass(frozen=True)
class BCheck(Arrow):
    dir: str
    a: Formula
    b: Formula
    c: Formula

    @cached_property
    def type(self) -> Sequent:
        right = Or(self.a, Or(self.b, self.c))
        left = Or(Or(self.a, self.b), self.c)
        return Sequent(right, left) if self.dir == FWD else Sequent(left, right)


@dataclass(frozen=True)
class CHat(Arrow):
    a: Formula
    b: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(And(self.a, self.b), And(self.b, self.a))


@dataclass(frozen=True)
class CCheck(Arrow):
    """Indexed by its target: B | A |- A | B."""
    a: Formula
    b: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(Or(self.b, self.a), Or(self.a, self.b))


@dataclass(frozen=True)
class D(Arrow):
    a: Formula
    b: Formula
    c: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(And(self.a, Or(self.b, self.c)), Or(And(self.a, self.b), self.c))


@dataclass(frozen=True)
class IotaAll(Arrow):
    x: str
    a: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(All(self.x, self.a), self.a)


@dataclass(frozen=True)
class IotaEx(Arrow):
    x: str
    a: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(self.a, Ex(self.x, self.a))


@dataclass(frozen=True)
class GammaAll(Arrow):
    x: str
    d: Formula

    @cached_property
    def type(self) -> Sequent:
        _need(self.x not in self.d.free, f"{self.x} is free in {self.d}")
        return Sequent(self.d, All(self.x, self.d))


@dataclass(frozen=True)
class GammaEx(Arrow):
    x: str
    d: Formula

    @cached_property
    def type(self) -> Sequent:
        _need(self.x not in self.d.free, f"{self.x} is free in {self.d}")
        return Sequent(Ex(self.x, self.d), self.d)


@dataclass(frozen=True)
class ThetaAll(Arrow):
    """all x.(A | D) |- (all x. A) | D, x not free in D."""
    x: str
    a: Formula
    d: Formula

    @cached_property
    def type(self) -> Sequent:
        _need(self.x not in self.d.free, f"{self.x} is free in {self.d}")
        return Sequent(All(self.x, Or(self.a, self.d)), Or(All(self.x, self.a), self.d))


@dataclass(frozen=True)
class ThetaEx(Arrow):
    """(some x. A) & D |- some x.(A & D), x not free in D."""
    x: str
    a: Formula
    d: Formula

    @cached_property
    def type(self) -> Sequent:
        _need(self.x not in self.d.free, f"{self.x} is free in {self.d}")
        return Sequent(And(Ex(self.x, self.a), self.d), Ex(self.x, And(self.a, self.d)))


@dataclass(frozen=True)
class DeltaAll(Arrow):
    """A |- A & crown, the crown being the closed excluded middle on B."""
    b: Formula
    a: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(self.a, And(self.a, crown_all(self.b)))


@dataclass(frozen=True)
class SigmaEx(Arrow):
    b: Formula
    a: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(Or(crown_ex(self.b), self.a), self.a)


@dataclass(frozen=True)
class Mix(Arrow):
    a: Formula
    b: Formula

    @cached_property
    def type(self) -> Sequent:
        return Sequent(And(self.a, self.b), Or(self.a, self.b))


# --- operations ----------------------------------------------------------------

@dataclass(frozen=True)
class Comp(Arrow):
    """g after f."""
    g: Arrow
    f: Arrow

    @cached_property
    def type(self) -> Sequent:
        ft, gt = self.f.type, self.g.type
        if ft.target != gt.source:
            raise TypeMismatch(f"cannot compose: {ft} then {gt}")
        return Sequent(ft.source, gt.target)


@dataclass(frozen=True)
class Tensor(Arrow):
    op: str
    f: Arrow
    g: Arrow

    @cached_property
    def type(self) -> Sequent:
        ft, gt = self.f.type, self.g.type
        return Sequent(Bin(self.op, ft.source, gt.source), Bin(self.op, ft.target, gt.target))


@dataclass(frozen=True)
class QArrow(Arrow):
    q: str
    x: str
    f: Arrow

    @cached_property
    def type(self) -> Sequent:
        ft = self.f.type
        return Sequent(Quant(self.q, self.x, ft.source), Quant(self.q, self.x, ft.target))


@dataclass(frozen=True)
class Ren(Arrow):
    """[f]^x_y: checked on the endpoints only."""
    x: str
    y: str
    f: Arrow

    @cached_property
    def type(self) -> Sequent:
        ft = self.f.type
        s = subst(ft.source, self.x, self.y)
        t = subst(ft.target, self.x, self.y)
        if s is None or t is None:
            bad = ft.source if s is None else ft.target
            raise UndefinedSubstitution(f"({print_formula(bad)})^{self.x}_{self.y} is not defined")
        return Sequent(s, t)


PRIMITIVES = (Id, BHat, BCheck, CHat, CCheck, D, IotaAll, IotaEx, GammaAll, GammaEx,
              ThetaAll, ThetaEx, DeltaAll, SigmaEx, Mix)


def children(t: Arrow) -> tuple[Arrow, ...]:
    if isinstance(t, Comp):
        return (t.g, t.f)
    if isinstance(t, Tensor):
        return (t.f, t.g)
    if isinstance(t, (QArrow, Ren)):
        return (t.f,)
    return ()


def subterms(t: Arrow) -> Iterator[Arrow]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(children(s))


def size(t: Arrow) -> int:
    return sum(1 for _ in subterms(t))


def typecheck(t: Arrow, system: System | str = System.QMPN_NEG) -> Sequent:
    """Type of t, after checking that every node is legal in system."""
    system = System.parse(system)
    typ = t.type
    for s in subterms(t):
        st = s.type
        check_system(st.source, system)
        check_system(st.target, system)
        if isinstance(s, (DeltaAll, SigmaEx)):
            if not system.has_delta:
                raise SystemViolation(f"{type(s).__name__} is not a primitive of {system.value}")
            if system.neg_grammar == "atomic" and not isinstance(s.b, Atom):
                raise SystemViolation(f"crown index must be atomic in {system.value}: {s.b}")
        elif isinstance(s, Mix) and not system.has_mix:
            raise SystemViolation(f"mix is not a primitive of {system.value}")
    return typ


def mk_rename(x: str, y: str, f: Arrow) -> Ren:
    r = Ren(x, y, f)
    r.type
    return r


# --- composites ----------------------------------------------------------------

def compose(*fs: Arrow) -> Arrow:
    """compose(h, g, f) is h after g after f."""
    out = fs[-1]
    for g in reversed(fs[:-1]):
        out = Comp(g, out)
    return out


def is_identity(t: Arrow) -> bool:
    if isinstance(t, Id):
        return True
    if isinstance(t, Tensor):
        return is_identity(t.f) and is_identity(t.g)
    if isinstance(t, QArrow):
        return is_identity(t.f)
    return False


def seq(*fs: Arrow) -> Arrow:
    """Like compose, but drops identity factors built only from 1, tensor
    and quantifier nodes; keeps one identity when nothing else is left."""
    kept = [f for f in fs if not is_identity(f)]
    return compose(*kept) if kept else fs[-1]


def wand(f: Arrow, g: Arrow) -> Tensor:
    return Tensor(AND, f, g)


def wor(f: Arrow, g: Arrow) -> Tensor:
    return Tensor(OR, f, g)


def qarrow(q: str, xs: list[str], f: Arrow) -> Arrow:
    """Q x_n ... Q x_1 f."""
    for x in xs:
        f = QArrow(q, x, f)
    return f


def d_right(c: Formula, b: Formula, a: Formula) -> Arrow:
    """(C | B) & A |- C | (B & A)."""
    return compose(CCheck(c, And(b, a)), wor(CHat(a, b), Id(c)), D(a, b, c),
                   wand(Id(a), CCheck(b, c)), CHat(Or(c, b), a))


def derive_tau(a: Formula, x: str, u: str, v: str, q: str = ALL) -> Arrow:
    """The bound-variable change with placeholder x, typed
    Q u. A[u/x] |- Q v. A[v/x] for both quantifiers."""
    _need(u not in a.free and v not in a.free, f"{u} or {v} is free in {a}")
    au = subst(a, x, u)
    av = subst(a, x, v)
    _need(au is not None and av is not None, f"substitution into {a} is undefined")
    if q == ALL:
        return tau_body(ALL, au, u, v)
    return tau_body(SOME, av, v, u)


def tau_body(q: str, au: Formula, u: str, v: str) -> Arrow:
    """Tau written on the instance body au in the variable u.  Universal:
    all u. au |- all v. au[v/u].  Existential: some v. au[v/u] |- some u. au."""
    if q == ALL:
        _need(v not in All(u, au).free, f"{v} is free in {All(u, au)}")
        return compose(QArrow(ALL, v, Ren(u, v, IotaAll(u, au))), GammaAll(v, All(u, au)))
    _need(v not in Ex(u, au).free, f"{v} is free in {Ex(u, au)}")
    return compose(GammaEx(v, Ex(u, au)), QArrow(SOME, v, Ren(u, v, IotaEx(u, au))))


def derive_theta(variant: str, x: str, a: Formula, d: Formula) -> Arrow:
    """The defined distribution arrows.

    'all<'   : (all x. A) | D |- all x.(A | D)
    'some>'  : some x.(A & D) |- (some x. A) & D
    'all&<'  : (all x. A) & D |- all x.(A & D)
    'some|>' : some x.(A | D) |- (some x. A) | D
    """
    _need(x not in d.free, f"{x} is free in {d}")
    if variant == "all<":
        return compose(QArrow(ALL, x, wor(IotaAll(x, a), Id(d))), GammaAll(x, Or(All(x, a), d)))
    if variant == "some>":
        return compose(GammaEx(x, And(Ex(x, a), d)), QArrow(SOME, x, wand(IotaEx(x, a), Id(d))))
    if variant == "all&<":
        return compose(QArrow(ALL, x, wand(IotaAll(x, a), Id(d))), GammaAll(x, And(All(x, a), d)))
    if variant == "some|>":
        return compose(GammaEx(x, Or(Ex(x, a), d)), QArrow(SOME, x, wor(IotaEx(x, a), Id(d))))
    raise ValueError(f"unknown theta variant {variant!r}")


def theta_all_vacuous(x: str, a: Formula, d: Formula) -> Arrow:
    """all x.(A | D) |- (all x. A) | D when x is free in neither."""
    return compose(wor(GammaAll(x, a), Id(d)), IotaAll(x, Or(a, d)))


def theta_ex_vacuous(x: str, a: Formula, d: Formula) -> Arrow:
    return compose(IotaEx(x, And(a, d)), wand(GammaEx(x, a), Id(d)))


def iota_closure(q: str, xs: list[str], b: Formula) -> Arrow:
    """all X. B |- B (universal) or B |- some X. B (existential)."""
    if not xs:
        return Id(b)
    inner = prefix(q, xs[:-1], b)
    rest = iota_closure(q, xs[:-1], b)
    if q == ALL:
        return compose(rest, IotaAll(xs[-1], inner))
    return compose(IotaEx(xs[-1], inner), rest)


def gamma_closure(q: str, xs: list[str], b: Formula) -> Arrow:
    """B |- all X. B (universal) or some X. B |- B (existential)."""
    if not xs:
        return Id(b)
    inner = prefix(q, xs[:-1], b)
    rest = gamma_closure(q, xs[:-1], b)
    if q == ALL:
        return compose(GammaAll(xs[-1], inner), rest)
    return compose(rest, GammaEx(xs[-1], inner))


def ren_closure(xs: list[str], ys: list[str], f: Arrow) -> Arrow:
    for x, y in zip(xs, ys):
        f = Ren(x, y, f)
    return f


def derive_closure(kind: str, q: str, xs: list[str], b: Formula | None = None,
                   f: Arrow | None = None, ys: list[str] | None = None) -> Arrow:
    if kind in ("iota", "ι"):
        return iota_closure(q, xs, b)
    if kind in ("gamma", "γ"):
        return gamma_closure(q, xs, b)
    if kind == "ren":
        return ren_closure(xs, ys or [], f)
    raise ValueError(f"unknown closure kind {kind!r}")


def tau_many(q: str, a: Formula, xs: list[str], us: list[str], vs: list[str]) -> Arrow:
    """Multi-variable tau: all U. A[U/X] |- all V. A[V/X] (universal) or
    some V. A[V/X] |- some U. A[U/X] (existential)."""
    au = a
    for x, u in zip(xs, us):
        au = subst(au, x, u)
        _need(au is not None, f"substitution into {a} is undefined")
    ren = ren_closure(us, vs, iota_closure(q, us, au))
    if q == ALL:
        return compose(qarrow(ALL, vs, ren), gamma_closure(ALL, vs, prefix(ALL, us, au)))
    return compose(gamma_closure(SOME, vs, prefix(SOME, us, au)), qarrow(SOME, vs, ren))


# --- the Delta/Sigma family ------------------------------------------------------

def xi_family(which: str, b: Formula, a: Formula) -> Arrow:
    """Abbreviations built from DeltaAll and SigmaEx.

    Names: 'Sigma_all', 'Delta_ex', 'Delta_check', 'Sigma_hat',
    'Delta_check1', 'Sigma_hat1', 'Delta1_all', 'Sigma1_ex', 'Sigma1_all',
    'Delta1_ex', 'Sigma_check', 'Delta_hat', 'Sigma_check1', 'Delta_hat1'.
    A trailing 1 marks the primed variant.
    """
    xs = free_var_sequence(b)
    nb = Neg(b)
    if which == "Delta_all":
        return DeltaAll(b, a)
    if which == "Sigma_ex":
        return SigmaEx(b, a)
    if which == "Sigma_all":
        return compose(CHat(a, crown_all(b)), DeltaAll(b, a))
    if which == "Delta_ex":
        return compose(SigmaEx(b, a), CCheck(crown_ex(b), a))
    if which == "Delta_check":
        return compose(wand(Id(a), iota_closure(ALL, xs, Or(nb, b))), DeltaAll(b, a))
    if which == "Sigma_hat":
        return compose(SigmaEx(b, a), wor(iota_closure(SOME, xs, And(b, nb)), Id(a)))
    if which == "Delta_check1":
        return compose(wand(Id(a), CCheck(b, nb)), xi_family("Delta_check", b, a))
    if which == "Sigma_hat1":
        return compose(xi_family("Sigma_hat", b, a), wor(CHat(nb, b), Id(a)))
    if which == "Delta1_all":
        return compose(wand(Id(a), qarrow(ALL, xs, CCheck(b, nb))), DeltaAll(b, a))
    if which == "Sigma1_ex":
        return compose(SigmaEx(b, a), wor(qarrow(SOME, xs, CHat(nb, b)), Id(a)))
    if which == "Sigma1_all":
        return compose(CHat(a, prefix(ALL, xs, Or(b, nb))), xi_family("Delta1_all", b, a))
    if which == "Delta1_ex":
        return compose(xi_family("Sigma1_ex", b, a), CCheck(prefix(SOME, xs, And(nb, b)), a))
    if which == "Sigma_check":
        return compose(CHat(a, Or(nb, b)), xi_family("Delta_check", b, a))
    if which == "Delta_hat":
        return compose(xi_family("Sigma_hat", b, a), CCheck(And(b, nb), a))
    if which == "Sigma_check1":
        return compose(CHat(a, Or(b, nb)), xi_family("Delta_check1", b, a))
    if which == "Delta_hat1":
        return compose(xi_family("Sigma_hat1", b, a), CCheck(And(nb, b), a))
    raise ValueError(f"unknown abbreviation {which!r}")


XI_NAMES = ("Sigma_all", "Delta_ex", "Delta_check", "Sigma_hat", "Delta_check1", "Sigma_hat1",
            "Delta1_all", "Sigma1_ex", "Sigma1_all", "Delta1_ex", "Sigma_check", "Delta_hat",
            "Sigma_check1", "Delta_hat1")


@dataclass(frozen=True)
class XiIndex:
    """Index tuple of the generalized constructors: an atom P X, a stem,
    outer variables Y, and the prefix sequences S (on P X) and S_neg (on
    its negation), each a list of (quantifier, variable)."""
    atom: Formula
    stem: Formula
    outer: tuple[str, ...] = ()
    s: tuple[tuple[str, str], ...] = ()
    s_neg: tuple[tuple[str, str], ...] = ()


def apply_prefix(s: tuple[tuple[str, str], ...], b: Formula) -> Formula:
    for q, x in reversed(s):
        b = Quant(q, x, b)
    return b


def foreign(s: tuple[tuple[str, str], ...], b: Formula) -> bool:
    return not ({x for _, x in s} & b.free)


def j_fwd(s: tuple[tuple[str, str], ...], b: Formula) -> Arrow:
    """B |- S B, from gamma on universal and iota on existential prefixes."""
    _need(foreign(s, b), "prefix sequence is not foreign to its formula")
    f: Arrow = Id(b)
    cur = b
    for q, x in reversed(s):
        step = GammaAll(x, cur) if q == ALL else IotaEx(x, cur)
        f = compose(step, f) if not isinstance(f, Id) else step
        cur = Quant(q, x, cur)
    return f


def j_bwd(s: tuple[tuple[str, str], ...], b: Formula) -> Arrow:
    """S B |- B, from iota on universal and gamma on existential prefixes."""
    _need(foreign(s, b), "prefix sequence is not foreign to its formula")
    f: Arrow = Id(b)
    cur = b
    for q, x in reversed(s):
        step = IotaAll(x, cur) if q == ALL else GammaEx(x, cur)
        f = compose(f, step) if not isinstance(f, Id) else step
        cur = Quant(q, x, cur)
    return f


def xi_index(which: str, ix: XiIndex) -> Arrow:
    """Generalized Delta/Sigma terms over an index tuple.

    which is one of 'Delta_all', 'Sigma_ex', 'Sigma_all', 'Delta_ex',
    'Delta1_all', 'Sigma1_ex', 'Sigma1_all', 'Delta1_ex'.
    """
    p, a, ys = ix.atom, ix.stem, list(ix.outer)
    xs = free_var_sequence(p)
    np_ = Neg(p)
    sp, snp = apply_prefix(ix.s, p), apply_prefix(ix.s_neg, np_)
    if which in ("Delta_all", "Sigma_all", "Delta1_all", "Sigma1_all"):
        body = wor(j_fwd(ix.s_neg, np_), j_fwd(ix.s, p))
        inner = compose(body, iota_closure(ALL, xs, Or(np_, p)))
        crown_fix = compose(qarrow(ALL, ys, inner), gamma_closure(ALL, ys, crown_all(p)))
        delta = compose(wand(Id(a), crown_fix), DeltaAll(p, a))
        crown = prefix(ALL, ys, Or(snp, sp))
        if which == "Delta_all":
            return delta
        if which == "Sigma_all":
            return compose(CHat(a, crown), delta)
        swapped = compose(wand(Id(a), qarrow(ALL, ys, CCheck(sp, snp))), delta)
        if which == "Delta1_all":
            return swapped
        return compose(CHat(a, prefix(ALL, ys, Or(sp, snp))), swapped)
    body = wand(j_bwd(ix.s, p), j_bwd(ix.s_neg, np_))
    inner = compose(iota_closure(SOME, xs, And(p, np_)), body)
    crown_fix = compose(gamma_closure(SOME, ys, crown_ex(p)), qarrow(SOME, ys, inner))
    sigma = compose(SigmaEx(p, a), wor(crown_fix, Id(a)))
    crown = prefix(SOME, ys, And(sp, snp))
    if which == "Sigma_ex":
        return sigma
    if which == "Delta_ex":
        return compose(sigma, CCheck(crown, a))
    swapped = compose(sigma, wor(qarrow(SOME, ys, CHat(snp, sp)), Id(a)))
    if which == "Sigma1_ex":
        return swapped
    if which == "Delta1_ex":
        return compose(swapped, CCheck(prefix(SOME, ys, And(snp, sp)), a))
    raise ValueError(f"unknown generalized constructor {which!r}")
