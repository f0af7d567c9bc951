"""Negation normal form on formulas and proof terms, and the negation
isomorphisms around it.

``nnf_formula`` pushes negation down to atoms by De Morgan and the
quantifier dualities.  ``nnf_arrow`` carries a term with arbitrary
negation to a term whose every formula is in negation normal form and
whose excluded-middle primitives have atomic crowns; on graphs it is the
identity, because it keeps the left-to-right order of atom occurrences.

``build_iso`` returns the comparison isomorphisms between a formula and
its normal form, ``negate_arrow`` is the contravariant negation of a
term, and ``build_double_neg`` the canonical arrow B |- not not B.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .arrows import (
                     BWD, FWD, Arrow, BCheck, BHat, CCheck, CHat, Comp, D, DeltaAll, GammaAll, GammaEx, Id,
                     IotaAll, IotaEx, QArrow, Ren, SigmaEx, Tensor, ThetaAll, ThetaEx, d_right,
                     derive_theta, gamma_closure, iota_closure, prefix, qarrow, seq, wand, wor, xi_family,
                     )
from .errors import SystemViolation
from .lang import (
                   ALL, AND, SOME, All, And, Atom, Bin, Ex, Formula, Neg, Or, Quant, dual_op, dual_q,
                   free_var_sequence,
                   )

__all__ = [
    "NnfResult", "nnf", "nnf_formula", "nnf_arrow", "build_q", "build_iso", "negate_arrow",
    "build_double_neg", "build_double_neg_inv", "theta_all_via_delta", "theta_ex_via_delta",
    "reorder_prefix",
]

TO, FROM = "->", "<-"


@dataclass(frozen=True)
class NnfResult:
    """A formula with negation on atoms only, and a term over such formulas."""
    formula: Formula
    arrow: Arrow


# --- formulas ---------------------------------------------------------------------

def nnf_formula(a: Formula) -> Formula:
    """Push every negation down to an atom."""
    if isinstance(a, Atom):
        return a
    if isinstance(a, Bin):
        return Bin(a.op, nnf_formula(a.left), nnf_formula(a.right))
    if isinstance(a, Quant):
        return Quant(a.q, a.var, nnf_formula(a.body))
    return _nnf_neg(a.body)


def _nnf_neg(b: Formula) -> Formula:
    """The normal form of not b."""
    if isinstance(b, Atom):
        return Neg(b)
    if isinstance(b, Neg):
        return nnf_formula(b.body)
    if isinstance(b, Bin):
        return Bin(dual_op(b.op), _nnf_neg(b.left), _nnf_neg(b.right))
    return Quant(dual_q(b.q), b.var, _nnf_neg(b.body))


# --- prefix reordering ----------------------------------------------------------

def _swap(q: str, a: str, b: str, c: Formula) -> Arrow:
    """Q a Q b C |- Q b Q a C from iota and gamma."""
    if q == ALL:
        inner = seq(IotaAll(b, c), IotaAll(a, All(b, c)))
        src = All(a, All(b, c))
        return seq(QArrow(ALL, b, seq(QArrow(ALL, a, inner), GammaAll(a, src))),
                   GammaAll(b, src))
    inner = seq(IotaEx(b, Ex(a, c)), IotaEx(a, c))
    tgt = Ex(b, Ex(a, c))
    return seq(GammaEx(a, tgt), QArrow(SOME, a, seq(GammaEx(b, tgt), QArrow(SOME, b, inner))))


def reorder_prefix(q: str, xs: list[str], ys: list[str], c: Formula) -> Arrow:
    """Q xs C |- Q ys C for a permutation ys of xs (innermost first), by a
    bubble sort of adjacent swaps."""
    if sorted(xs) != sorted(ys) or len(set(xs)) != len(xs):
        raise ValueError(f"{ys} is not a permutation of {xs}")
    cur = list(xs)
    steps: list[Arrow] = []
    rank = {v: k for k, v in enumerate(ys)}
    changed = True
    while changed:
        changed = False
        for j in range(len(cur) - 1):
            if rank[cur[j]] > rank[cur[j + 1]]:
                # cur[j + 1] is the outer of the pair; it moves inward.
                body = prefix(q, cur[:j], c)
                steps.append(qarrow(q, cur[j + 2:], _swap(q, cur[j + 1], cur[j], body)))
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                changed = True
    if not steps:
        return Id(prefix(q, xs, c))
    return seq(*reversed(steps))


def _bring_inside(q: str, xs: list[str], x: str, c: Formula) -> Arrow:
    """Q xs C |- Q (xs without x) Q x C."""
    return reorder_prefix(q, xs, [x] + [v for v in xs if v != x], c)


def _bring_outside(q: str, xs: list[str], x: str, c: Formula) -> Arrow:
    """Q (xs without x) Q x C |- Q xs C."""
    return reorder_prefix(q, [x] + [v for v in xs if v != x], xs, c)


# --- the crown translations -------------------------------------------------------

def _cup_and(a1: Formula, a: Formula, b1: Formula, b: Formula) -> Arrow:
    """(a1 | a) & (b1 | b) |- (a1 | b1) | (a & b)."""
    inner = seq(CCheck(b1, And(a, b)), D(a, b, b1), wand(Id(a), CCheck(b, b1)))
    return seq(BCheck(FWD, a1, b1, And(a, b)), wor(Id(a1), inner), d_right(a1, a, Or(b1, b)))


def _cup_or(a1: Formula, a: Formula, b1: Formula, b: Formula) -> Arrow:
    """(a1 | a) & (b1 | b) |- (a1 & b1) | (a | b)."""
    start = wand(CCheck(a, a1), Id(Or(b1, b)))
    step = d_right(a, a1, Or(b1, b))
    step2 = wor(Id(a), D(a1, b1, b))
    # a | ((a1 & b1) | b)  |-  (a1 & b1) | (a | b)
    x = And(a1, b1)
    tail = seq(BCheck(BWD, x, a, b), wor(CCheck(x, a), Id(b)), BCheck(FWD, a, x, b))
    return seq(tail, step2, step, start)


def _cap_and(a: Formula, a1: Formula, b: Formula, b1: Formula) -> Arrow:
    """(a & b) & (a1 | b1) |- (a & a1) | (b & b1)."""
    inner = seq(D(b, b1, a1), wand(Id(b), CCheck(b1, a1)))
    x = And(b, b1)
    outer = seq(D(a, a1, x), wand(Id(a), CCheck(a1, x)))
    return seq(outer, wand(Id(a), inner), BHat(BWD, a, b, Or(a1, b1)))


def _cap_or(a: Formula, a1: Formula, b: Formula, b1: Formula) -> Arrow:
    """(a | b) & (a1 & b1) |- (a & a1) | (b & b1)."""
    right = seq(D(b1, b, a), wand(Id(b1), CCheck(b, a)))
    mid = seq(wand(Id(a1), right), BHat(BWD, a1, b1, Or(a, b)), CHat(Or(a, b), And(a1, b1)))
    y = And(b1, b)
    last = seq(wor(CHat(a1, a), CHat(b1, b)), D(a1, a, y), wand(Id(a1), CCheck(a, y)))
    return seq(last, mid)


def _crown_all_nnf(b: Formula) -> Formula:
    """all X (F not b | F b)."""
    return prefix(ALL, free_var_sequence(b), Or(_nnf_neg(b), nnf_formula(b)))


def _crown_ex_nnf(b: Formula) -> Formula:
    """some X (F b & F not b)."""
    return prefix(SOME, free_var_sequence(b), And(nnf_formula(b), _nnf_neg(b)))


def nnf_delta(b: Formula, a: Formula) -> Arrow:
    """A |- A & all X (F not b | F b) with atomic crowns only; a is taken
    as the stem as it stands."""
    xs = free_var_sequence(b)
    if isinstance(b, Atom):
        return DeltaAll(b, a)
    if isinstance(b, Neg):
        c = b.body
        fix = qarrow(ALL, xs, CCheck(nnf_formula(c), _nnf_neg(c)))
        return seq(wand(Id(a), fix), nnf_delta(c, a))
    if isinstance(b, Bin):
        c, e = b.left, b.right
        cr_c, cr_e = _crown_all_nnf(c), _crown_all_nnf(e)
        nc, ne, fc, fe = _nnf_neg(c), _nnf_neg(e), nnf_formula(c), nnf_formula(e)
        prop = _cup_and(nc, fc, ne, fe) if b.op == AND else _cup_or(nc, fc, ne, fe)
        opened = wand(iota_closure(ALL, free_var_sequence(c), Or(nc, fc)),
                      iota_closure(ALL, free_var_sequence(e), Or(ne, fe)))
        merge = seq(qarrow(ALL, xs, seq(prop, opened)),
                    gamma_closure(ALL, xs, And(cr_c, cr_e)))
        return seq(wand(Id(a), merge), BHat(BWD, a, cr_c, cr_e),
                   nnf_delta(e, And(a, cr_c)), nnf_delta(c, a))
    x, c = b.var, b.body
    inner_xs = free_var_sequence(c)
    nc, fc = _nnf_neg(c), nnf_formula(c)
    if x in c.free:
        if b.q == ALL:
            body = seq(CCheck(Ex(x, nc), All(x, fc)), ThetaAll(x, fc, Ex(x, nc)),
                       QArrow(ALL, x, seq(CCheck(fc, Ex(x, nc)), wor(IotaEx(x, nc), Id(fc)))))
        else:
            body = seq(ThetaAll(x, nc, Ex(x, fc)), QArrow(ALL, x, wor(Id(nc), IotaEx(x, fc))))
        fix = seq(qarrow(ALL, xs, body), _bring_inside(ALL, inner_xs, x, Or(nc, fc)))
    elif b.q == ALL:
        fix = qarrow(ALL, xs, wor(IotaEx(x, nc), GammaAll(x, fc)))
    else:
        fix = qarrow(ALL, xs, wor(GammaAll(x, nc), IotaEx(x, fc)))
    return seq(wand(Id(a), fix), nnf_delta(c, a))


def nnf_sigma(b: Formula, a: Formula) -> Arrow:
    """some X (F b & F not b) | A |- A with atomic crowns only."""
    xs = free_var_sequence(b)
    if isinstance(b, Atom):
        return SigmaEx(b, a)
    if isinstance(b, Neg):
        c = b.body
        fix = qarrow(SOME, xs, CHat(_nnf_neg(c), nnf_formula(c)))
        return seq(nnf_sigma(c, a), wor(fix, Id(a)))
    if isinstance(b, Bin):
        c, e = b.left, b.right
        cr_c, cr_e = _crown_ex_nnf(c), _crown_ex_nnf(e)
        nc, ne, fc, fe = _nnf_neg(c), _nnf_neg(e), nnf_formula(c), nnf_formula(e)
        prop = _cap_and(fc, nc, fe, ne) if b.op == AND else _cap_or(fc, nc, fe, ne)
        closed = wor(iota_closure(SOME, free_var_sequence(c), And(fc, nc)),
                     iota_closure(SOME, free_var_sequence(e), And(fe, ne)))
        split = seq(gamma_closure(SOME, xs, Or(cr_c, cr_e)),
                    qarrow(SOME, xs, seq(closed, prop)))
        return seq(nnf_sigma(c, a), wor(Id(cr_c), nnf_sigma(e, a)),
                   BCheck(BWD, cr_c, cr_e, a), wor(split, Id(a)))
    x, c = b.var, b.body
    inner_xs = free_var_sequence(c)
    nc, fc = _nnf_neg(c), nnf_formula(c)
    if x in c.free:
        if b.q == ALL:
            body = seq(QArrow(SOME, x, wand(IotaAll(x, fc), Id(nc))),
                       QArrow(SOME, x, CHat(nc, All(x, fc))),
                       ThetaEx(x, nc, All(x, fc)), CHat(All(x, fc), Ex(x, nc)))
        else:
            body = seq(QArrow(SOME, x, wand(Id(fc), IotaAll(x, nc))), ThetaEx(x, fc, All(x, nc)))
        fix = seq(_bring_outside(SOME, inner_xs, x, And(fc, nc)), qarrow(SOME, xs, body))
    elif b.q == ALL:
        fix = qarrow(SOME, xs, wand(IotaAll(x, fc), GammaEx(x, nc)))
    else:
        fix = qarrow(SOME, xs, wand(GammaEx(x, fc), IotaAll(x, nc)))
    return seq(nnf_sigma(c, a), wor(fix, Id(a)))


# --- terms ---------------------------------------------------------------------------

def nnf_arrow(f: Arrow) -> Arrow:
    """The translation of f into a term over normal-form formulas with
    atomic crowns.  Source and target are the normal forms of those of f,
    and the graph is that of f."""
    if isinstance(f, Comp):
        return Comp(nnf_arrow(f.g), nnf_arrow(f.f))
    if isinstance(f, Tensor):
        return Tensor(f.op, nnf_arrow(f.f), nnf_arrow(f.g))
    if isinstance(f, QArrow):
        return QArrow(f.q, f.x, nnf_arrow(f.f))
    if isinstance(f, Ren):
        return Ren(f.x, f.y, nnf_arrow(f.f))
    if isinstance(f, DeltaAll):
        return nnf_delta(f.b, nnf_formula(f.a))
    if isinstance(f, SigmaEx):
        return nnf_sigma(f.b, nnf_formula(f.a))
    changes = {fl.name: nnf_formula(getattr(f, fl.name)) for fl in fields(f)
               if isinstance(getattr(f, fl.name), Formula)}
    return replace(f, **changes) if changes else f


def nnf(f: Arrow) -> NnfResult:
    """The translated term with its target formula."""
    g = nnf_arrow(f)
    return NnfResult(g.target, g)


# --- the quantifier negation isomorphisms ------------------------------------------

def build_q(x: str, a: Formula, q: str, direction: str = TO) -> Arrow:
    """not Q x A |- Q' x not A (direction '->') and its inverse ('<-'),
    Q' being the dual quantifier."""
    xs = free_var_sequence(a)
    na = Neg(a)
    if q == ALL:
        qa, dual = All(x, a), Ex(x, na)
        ys = free_var_sequence(qa)
        if direction == TO:
            body = seq(ThetaAll(x, a, dual),
                       QArrow(ALL, x, seq(wor(Id(a), IotaEx(x, na)),
                                          iota_closure(ALL, xs, Or(a, na)))),
                       GammaAll(x, prefix(ALL, xs, Or(a, na))))
            return seq(xi_family("Sigma1_ex", qa, dual),
                       wor(iota_closure(SOME, ys, And(Neg(qa), qa)), Id(dual)),
                       D(Neg(qa), qa, dual), wand(Id(Neg(qa)), body),
                       xi_family("Delta1_all", a, Neg(qa)))
        left = seq(GammaEx(x, prefix(SOME, xs, And(na, a))),
                   QArrow(SOME, x, seq(iota_closure(SOME, xs, And(na, a)),
                                       wand(Id(na), IotaAll(x, a)))),
                   ThetaEx(x, na, qa))
        return seq(xi_family("Sigma1_ex", a, Neg(qa)), wor(left, Id(Neg(qa))),
                   D(dual, qa, Neg(qa)),
                   wand(Id(dual), iota_closure(ALL, ys, Or(qa, Neg(qa)))),
                   xi_family("Delta1_all", qa, dual))
    qa, dual = Ex(x, a), All(x, na)
    ys = free_var_sequence(qa)
    if direction == TO:
        body = seq(ThetaAll(x, na, qa),
                   QArrow(ALL, x, seq(wor(Id(na), IotaEx(x, a)),
                                      iota_closure(ALL, xs, Or(na, a)))),
                   GammaAll(x, prefix(ALL, xs, Or(na, a))))
        return seq(xi_family("Sigma1_ex", qa, dual),
                   wor(iota_closure(SOME, ys, And(Neg(qa), qa)), Id(dual)),
                   D(Neg(qa), qa, dual), wand(Id(Neg(qa)), CCheck(qa, dual)),
                   wand(Id(Neg(qa)), body), DeltaAll(a, Neg(qa)))
    left = seq(GammaEx(x, prefix(SOME, xs, And(a, na))),
               QArrow(SOME, x, seq(iota_closure(SOME, xs, And(a, na)),
                                   wand(Id(a), IotaAll(x, na)))),
               ThetaEx(x, a, dual), CHat(dual, qa))
    return seq(SigmaEx(a, Neg(qa)), wor(left, Id(Neg(qa))), D(dual, qa, Neg(qa)),
               wand(Id(dual), iota_closure(ALL, ys, Or(qa, Neg(qa)))),
               xi_family("Delta1_all", qa, dual))


# --- double negation and the comparison isomorphisms --------------------------------

def build_double_neg(b: Formula) -> Arrow:
    """B |- not not B."""
    nb, nnb = Neg(b), Neg(Neg(b))
    return seq(xi_family("Sigma_hat", b, nnb), D(b, nb, nnb), xi_family("Delta_check1", nb, b))


def build_double_neg_inv(b: Formula) -> Arrow:
    """not not B |- B."""
    nb, nnb = Neg(b), Neg(Neg(b))
    return seq(xi_family("Sigma_hat1", nb, b), D(nnb, nb, b), xi_family("Delta_check", b, nnb))


def _neg_to_nnf(c: Formula, i_inv_c: Arrow) -> Arrow:
    """not C |- F not C, from the inverse comparison arrow of C."""
    fc, n = nnf_formula(c), _nnf_neg(c)
    nc = Neg(c)
    return seq(xi_family("Sigma_hat1", c, n), D(nc, c, n), wand(Id(nc), CCheck(c, n)),
               wand(Id(nc), wor(Id(n), i_inv_c)),
               wand(Id(nc), iota_closure(ALL, free_var_sequence(c), Or(n, fc))),
               nnf_delta(c, nc))


def _nnf_to_neg(c: Formula, i_c: Arrow) -> Arrow:
    """F not C |- not C, from the comparison arrow of C."""
    fc, n = nnf_formula(c), _nnf_neg(c)
    nc = Neg(c)
    return seq(nnf_sigma(c, nc),
               wor(iota_closure(SOME, free_var_sequence(c), And(fc, n)), Id(nc)),
               wor(CHat(n, fc), Id(nc)), D(n, fc, nc), wand(Id(n), wor(i_c, Id(nc))),
               xi_family("Delta_check1", c, n))


def build_iso(a: Formula) -> tuple[Arrow, Arrow]:
    """(i, i_inv) with i: A |- F A and i_inv: F A |- A."""
    if isinstance(a, Atom) or (isinstance(a, Neg) and isinstance(a.body, Atom)):
        return Id(a), Id(a)
    if isinstance(a, Bin):
        il, jl = build_iso(a.left)
        ir, jr = build_iso(a.right)
        return Tensor(a.op, il, ir), Tensor(a.op, jl, jr)
    if isinstance(a, Quant):
        i, j = build_iso(a.body)
        return QArrow(a.q, a.var, i), QArrow(a.q, a.var, j)
    c = a.body
    if isinstance(c, Quant):
        i, j = build_iso(Neg(c.body))
        dq = dual_q(c.q)
        return (seq(QArrow(dq, c.var, i), build_q(c.var, c.body, c.q, TO)),
                seq(build_q(c.var, c.body, c.q, FROM), QArrow(dq, c.var, j)))
    i_c, j_c = build_iso(c)
    return _neg_to_nnf(c, j_c), _nnf_to_neg(c, i_c)


# --- contravariant negation ---------------------------------------------------------

def negate_arrow(f: Arrow) -> Arrow:
    """not B |- not A for f: A |- B."""
    a, b = f.source, f.target
    na, nb = Neg(a), Neg(b)
    return seq(xi_family("Sigma_hat1", b, na), D(nb, b, na), wand(Id(nb), wor(f, Id(na))),
               xi_family("Delta_check1", a, nb))


# --- the distribution arrows through excluded middle --------------------------------

def theta_all_via_delta(x: str, a: Formula, d: Formula) -> Arrow:
    """all x (A | D) |- (all x A) | D without the primitive distribution."""
    if x in d.free:
        raise SystemViolation(f"{x} is free in {d}")
    nd = Neg(d)
    src = All(x, Or(a, d))
    inner = QArrow(ALL, x, seq(xi_family("Delta_hat", d, a), d_right(a, d, nd)))
    return seq(wor(seq(inner, derive_theta("all&<", x, Or(a, d), nd)), Id(d)),
               D(src, nd, d), xi_family("Delta_check", d, src))


def theta_ex_via_delta(x: str, a: Formula, d: Formula) -> Arrow:
    """(some x A) & D |- some x (A & D) without the primitive distribution."""
    if x in d.free:
        raise SystemViolation(f"{x} is free in {d}")
    nd = Neg(d)
    tgt = Ex(x, And(a, d))
    left = seq(derive_theta("some|>", x, And(a, d), nd),
               QArrow(SOME, x, seq(D(a, d, nd), xi_family("Delta_check1", d, a))))
    return seq(xi_family("Delta_hat1", d, tgt), d_right(tgt, nd, d), wand(left, Id(d)))
