"""The axiomatic equations as data.

Each schema side is a *pattern*: an ordinary arrow term whose leaves may
be metavariables.  ``MF`` stands for a formula, ``MA`` for an arrow, and a
string starting with ``?`` for a variable.  ``FF``/``FA`` nodes are
computed formulas and arrows (a substitution, a crown, a derived arrow);
they are evaluated once their arguments are known.

The same pattern serves three purposes: random instantiation for the
soundness suite, matching for one-step rewriting, and building the
rewritten side.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass, field
from typing import Any, Callable

from . import arrows as ar
from .arrows import (
    BWD, FWD, Arrow, BCheck, BHat, CCheck, CHat, Comp, D, DeltaAll, GammaAll, GammaEx, Id,
    IotaAll, IotaEx, Mix, QArrow, Ren, SigmaEx, Tensor, ThetaAll, ThetaEx,
)
from .errors import KernelError, UndefinedSubstitution
from .lang import (
    ALL, AND, OR, SOME, Bin, Formula, Neg, Quant, System, free_var_sequence,
    subst,
)


# --- pattern language -------------------------------------------------------------

@dataclass(frozen=True)
class MF(Formula):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FF(Formula):
    fn: Callable
    args: tuple

    def __str__(self) -> str:
        return f"{self.fn.__name__}{self.args}"


@dataclass(frozen=True)
class MA(Arrow):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FA(Arrow):
    fn: Callable
    args: tuple

    def __str__(self) -> str:
        return f"{self.fn.__name__}{self.args}"


class Unbound(Exception):
    pass


def is_var_meta(s: Any) -> bool:
    return isinstance(s, str) and s.startswith("?")


def instantiate(p: Any, inst: dict[str, Any]) -> Any:
    if is_var_meta(p):
        if p not in inst:
            raise Unbound(p)
        return inst[p]
    if isinstance(p, (MF, MA)):
        if p.name not in inst:
            raise Unbound(p.name)
        return inst[p.name]
    if isinstance(p, (FF, FA)):
        return p.fn(*(instantiate(a, inst) for a in p.args))
    if isinstance(p, tuple):
        return tuple(instantiate(a, inst) for a in p)
    if isinstance(p, list):
        return [instantiate(a, inst) for a in p]
    if dataclasses.is_dataclass(p) and not isinstance(p, type):
        vals = [instantiate(getattr(p, f.name), inst) for f in dataclasses.fields(p)]
        return type(p)(*vals)
    return p


def _match(p: Any, t: Any, inst: dict[str, Any], deferred: list) -> bool:
    if is_var_meta(p):
        if p in inst:
            return inst[p] == t
        inst[p] = t
        return True
    if isinstance(p, (MF, MA)):
        if isinstance(p, MF) != isinstance(t, Formula):
            return False
        if p.name in inst:
            return inst[p.name] == t
        inst[p.name] = t
        return True
    if isinstance(p, (FF, FA)):
        deferred.append((p, t))
        return True
    if isinstance(p, tuple):
        return (isinstance(t, tuple) and len(p) == len(t)
                and all(_match(a, b, inst, deferred) for a, b in zip(p, t)))
    if dataclasses.is_dataclass(p) and not isinstance(p, type):
        if type(p) is not type(t):
            return False
        return all(_match(getattr(p, f.name), getattr(t, f.name), inst, deferred)
                   for f in dataclasses.fields(p))
    return p == t


def match(p: Any, t: Any, inst: dict[str, Any] | None = None) -> dict[str, Any] | None:
    """Bindings making the pattern p equal to t, or None."""
    inst = dict(inst or {})
    deferred: list = []
    if not _match(p, t, inst, deferred):
        return None
    for q, target in deferred:
        try:
            if instantiate(q, inst) != target:
                return None
        except (Unbound, KernelError):
            return None
    return inst


def metas(p: Any, out: set[str] | None = None) -> set[str]:
    out = set() if out is None else out
    if is_var_meta(p):
        out.add(p)
    elif isinstance(p, (MF, MA)):
        out.add(p.name)
    elif isinstance(p, (FF, FA)):
        for a in p.args:
            metas(a, out)
    elif isinstance(p, (tuple, list)):
        for a in p:
            metas(a, out)
    elif dataclasses.is_dataclass(p) and not isinstance(p, type):
        for f in dataclasses.fields(p):
            metas(getattr(p, f.name), out)
    return out


# --- computed nodes -----------------------------------------------------------------

def src(t: Arrow) -> Formula:
    return t.source


def tgt(t: Arrow) -> Formula:
    return t.target


def sub(a: Formula, x: str, y: str) -> Formula:
    r = subst(a, x, y)
    if r is None:
        raise UndefinedSubstitution(f"({a})^{x}_{y} is not defined")
    return r


def body(a: Formula) -> Formula:
    if not isinstance(a, Quant):
        raise KernelError(f"not a quantified formula: {a}")
    return a.body


def _src(f):
    return FF(src, (f,))


def _tgt(f):
    return FF(tgt, (f,))


def _sub(a, x, y):
    return FF(sub, (a, x, y))


def _crown_all(b):
    return FF(ar.crown_all, (b,))


def _crown_ex(b):
    return FF(ar.crown_ex, (b,))


def _neg(a):
    return Neg(a)


def _fvs_prefix_all(b, body_):
    return FF(lambda b_, c: ar.prefix(ALL, free_var_sequence(b_), c), (b, body_))


def _theta(variant, x, a, d):
    return FA(ar.derive_theta, (variant, x, a, d))


def _iota_crown(q, b):
    if q == ALL:
        return FA(lambda b_: ar.iota_closure(ALL, free_var_sequence(b_), Bin(OR, Neg(b_), b_)), (b,))
    return FA(lambda b_: ar.iota_closure(SOME, free_var_sequence(b_), Bin(AND, b_, Neg(b_))), (b,))


def _prefixed(q, b, body_fn):
    return FF(lambda b_: ar.prefix(q, free_var_sequence(b_), body_fn(b_)), (b,))


def _qcl(q, b, arrow_fn):
    return FA(lambda b_: ar.qarrow(q, free_var_sequence(b_), arrow_fn(b_)), (b,))


def _xi(which, b, a):
    """The abbreviations of the Delta/Sigma family as patterns.  Mirrors
    :func:`qcoh.arrows.xi_family`, but keeps B and A visible to the
    matcher."""
    nb = Neg(b)
    if which == "Sigma_all":
        return Comp(CHat(a, _crown_all(b)), DeltaAll(b, a))
    if which == "Delta_ex":
        return Comp(SigmaEx(b, a), CCheck(_crown_ex(b), a))
    if which == "Delta_check":
        return Comp(Tensor(AND, Id(a), _iota_crown(ALL, b)), DeltaAll(b, a))
    if which == "Sigma_hat":
        return Comp(SigmaEx(b, a), Tensor(OR, _iota_crown(SOME, b), Id(a)))
    if which == "Delta_check1":
        return Comp(Tensor(AND, Id(a), CCheck(b, nb)), _xi("Delta_check", b, a))
    if which == "Sigma_hat1":
        return Comp(_xi("Sigma_hat", b, a), Tensor(OR, CHat(nb, b), Id(a)))
    if which == "Delta1_all":
        return Comp(Tensor(AND, Id(a), _qcl(ALL, b, lambda b_: CCheck(b_, Neg(b_)))), DeltaAll(b, a))
    if which == "Sigma1_ex":
        return Comp(SigmaEx(b, a), Tensor(OR, _qcl(SOME, b, lambda b_: CHat(Neg(b_), b_)), Id(a)))
    if which == "Sigma1_all":
        return Comp(CHat(a, _prefixed(ALL, b, lambda b_: Bin(OR, b_, Neg(b_)))), _xi("Delta1_all", b, a))
    if which == "Delta1_ex":
        return Comp(_xi("Sigma1_ex", b, a), CCheck(_prefixed(SOME, b, lambda b_: Bin(AND, Neg(b_), b_)), a))
    if which == "Sigma_check":
        return Comp(CHat(a, Bin(OR, nb, b)), _xi("Delta_check", b, a))
    if which == "Delta_hat":
        return Comp(_xi("Sigma_hat", b, a), CCheck(Bin(AND, b, nb), a))
    if which == "Sigma_check1":
        return Comp(CHat(a, Bin(OR, b, nb)), _xi("Delta_check1", b, a))
    if which == "Delta_hat1":
        return Comp(_xi("Sigma_hat1", b, a), CCheck(Bin(AND, nb, b), a))
    raise ValueError(which)


def _tau_all(au, u, v):
    """Universal bound-variable change all u. au |- all v. au[v/u], as a
    pattern on its base au."""
    return Comp(QArrow(ALL, v, Ren(u, v, IotaAll(u, au))), GammaAll(v, Quant(ALL, u, au)))


def _tau_ex(av, u, v):
    """Existential change some u. av[u/v] |- some v. av, on its base av."""
    return Comp(GammaEx(u, Quant(SOME, v, av)), QArrow(SOME, u, Ren(v, u, IotaEx(v, av))))


def _dr(c, b, a):
    return FA(ar.d_right, (c, b, a))


def _double_neg(b):
    from .translate import build_double_neg
    return build_double_neg(b)


def _crown_n(b):
    """1-closure lifting of n^->_B | 1 under the crown's prefix."""
    xs = free_var_sequence(b)
    return ar.qarrow(ALL, xs, Tensor(OR, _double_neg(b), Id(Neg(b))))


def _sub_many(a, xs, ys):
    r = a
    for x, y in zip(xs, ys):
        r = sub(r, x, y)
    return r


# --- schemas ------------------------------------------------------------------------

@dataclass
class Variant:
    lhs: Any
    rhs: Any
    slots: list = field(default_factory=list)
    proviso: Callable[[dict], bool] = lambda inst: True
    requires: frozenset = frozenset()
    nvars: int = 4
    label: str = ""
    complete: Callable | None = None


@dataclass
class AxiomSchema:
    """A named equation (possibly with several variants, e.g. one per
    connective) and the least system in which it is stated."""
    name: str
    system: System
    variants: list[Variant]
    derived: bool = False
    requires: frozenset = frozenset()

    def available(self, system: System) -> list[Variant]:
        return [v for v in self.variants if _features_ok(v.requires | self.requires, system)]


def _features_ok(req: frozenset, system: System) -> bool:
    if "delta" in req and not system.has_delta:
        return False
    if "mix" in req and not system.has_mix:
        return False
    if "freeneg" in req and system.neg_grammar != "free":
        return False
    return True


VAR_POOL = ("x", "y", "z", "w", "t")


def sample_variant(v: Variant, gen, inst: dict | None = None) -> dict[str, Any]:
    """Random values for the slots of v, in order."""
    inst = dict(inst or {})
    rng: random.Random = gen.rng
    pool = list(VAR_POOL[:v.nvars])
    for slot in v.slots:
        kind = slot[0]
        if kind == "vars":
            names = [n for n in slot[1] if n not in inst]
            avail = [p for p in pool if p not in {inst.get(k) for k in inst if is_var_meta(k)}]
            if len(avail) < len(names):
                avail = list(pool)
            for n, val in zip(names, rng.sample(avail, len(names))):
                inst[n] = val
        elif kind == "var":
            inst[slot[1]] = rng.choice(pool)
        elif kind == "form":
            opts = slot[2] if len(slot) > 2 else {}
            avoid = frozenset(inst[a] for a in opts.get("avoid", ()))
            size = rng.randint(0, opts.get("size", 2))
            inst[slot[1]] = gen.formula(size, avoid)
        elif kind == "crown":
            inst[slot[1]] = gen.crown_index()
        elif kind == "arrow":
            opts = slot[2] if len(slot) > 2 else {}
            avoid = frozenset(inst[a] for a in opts.get("avoid", ()))
            budget = rng.randint(1, opts.get("budget", 4))
            if "src" in opts:
                inst[slot[1]] = gen.arrow_from(instantiate(opts["src"], inst), budget, avoid)
            else:
                inst[slot[1]] = gen.arrow(budget, avoid)
        elif kind == "custom":
            slot[1](gen, inst)
        else:
            raise ValueError(kind)
    return inst


def build_sides(v: Variant, inst: dict, system: System) -> tuple[Arrow, Arrow]:
    """Both sides of an instance; raises when the instance is not
    proviso-respecting or a side is undefined in system."""
    if not v.proviso(inst):
        raise KernelError("proviso fails")
    lhs = instantiate(v.lhs, inst)
    rhs = instantiate(v.rhs, inst)
    ar.typecheck(lhs, system)
    ar.typecheck(rhs, system)
    return lhs, rhs


def instance_size(inst: dict) -> int:
    """The largest formula among the values of an instantiation, counting
    both endpoints of arrow values."""
    sizes = [0]
    for val in inst.values():
        if isinstance(val, Formula):
            sizes.append(val.size)
        elif isinstance(val, Arrow):
            sizes += [val.source.size, val.target.size]
    return max(sizes)


def random_instance(schema: AxiomSchema, system: System | str, gen, tries: int = 400,
                    max_size: int | None = None) -> tuple[Variant, dict, Arrow, Arrow]:
    """A proviso-respecting instance with both sides defined.  With
    max_size, instantiations holding a larger formula are redrawn."""
    system = System.parse(system)
    variants = schema.available(system)
    if not variants:
        raise KernelError(f"{schema.name} has no variant in {system.value}")
    last: Exception | None = None
    for _ in range(tries):
        v = gen.rng.choice(variants)
        try:
            inst = sample_variant(v, gen)
            if max_size is not None and instance_size(inst) > max_size:
                last = KernelError(f"instantiation larger than {max_size}")
                continue
            lhs, rhs = build_sides(v, inst, system)
            return v, inst, lhs, rhs
        except (KernelError, Unbound) as exc:
            last = exc
    raise RuntimeError(f"no valid instance of {schema.name} after {tries} tries: {last}")


# --- the table ------------------------------------------------------------------

A, B, C, Dm, E, Fm = MF("A"), MF("B"), MF("C"), MF("D"), MF("E"), MF("F")
f, g, h, f1, f2, g1, g2 = MA("f"), MA("g"), MA("h"), MA("f1"), MA("f2"), MA("g1"), MA("g2")
x, y, z, v, u, w = "?x", "?y", "?z", "?v", "?u", "?w"


def _forms(*names, size=2, avoid=()):
    return [("form", n, {"size": size, "avoid": avoid}) for n in names]


def _arr(name, budget=4, **opts):
    return ("arrow", name, dict(budget=budget, **opts))


def _distinct(*names):
    return lambda inst: len({inst[n] for n in names}) == len(names)


def _ren_tau_ok(inst):
    return len({inst[y], inst[z], inst[u]}) == 3 and inst[v] not in (inst[y], inst[z])


def _nat_tau_ok(inst):
    ends = inst["f"].source.free | inst["f"].target.free
    return inst[u] not in ends and inst[v] not in ends and inst[x] not in (inst[u], inst[v])


def _fresh_seq_ok(inst):
    us, vs = inst["U"], free_var_sequence(inst["B"])
    return len(set(us)) == len(us) == len(vs) and not set(us) & set(vs)


def _fresh_seq(inst, gen, used):
    n = len(free_var_sequence(inst["B"]))
    pool = [p for p in VAR_POOL[:4] if p not in inst["B"].free]
    pool += [f"v{k}" for k in range(n) if f"v{k}" not in used]
    inst["U"] = tuple(gen.rng.sample(pool, n))


def _not_free(var, *forms):
    return lambda inst: all(inst[var] not in inst[fm].free for fm in forms)


def _ops(build):
    """One variant per connective."""
    return [dataclasses.replace(build(op), label=op) for op in (AND, OR)]


def _bop(op):
    return BHat if op == AND else BCheck


def _build_table() -> list[AxiomSchema]:
    S = System
    T: list[AxiomSchema] = []

    def add(name, variants, system=S.QDS, derived=False, requires=frozenset()):
        if isinstance(variants, Variant):
            variants = [variants]
        T.append(AxiomSchema(name, system, variants, derived, frozenset(requires)))

    # categorial
    add("(cat 1)", [
        Variant(Comp(f, Id(_src(f))), f, [_arr("f")], label="right unit"),
        Variant(Comp(Id(_tgt(f)), f), f, [_arr("f")], label="left unit"),
    ])
    add("(cat 2)", Variant(Comp(h, Comp(g, f)), Comp(Comp(h, g), f),
                           [_arr("f"), _arr("g", src=_tgt(f)), _arr("h", src=_tgt(g))]))
    # DS
    add("(⋆1)", _ops(lambda op: Variant(Tensor(op, Id(A), Id(B)), Id(Bin(op, A, B)), _forms("A", "B"))))
    add("(⋆2)", _ops(lambda op: Variant(
        Tensor(op, Comp(g1, f1), Comp(g2, f2)), Comp(Tensor(op, g1, g2), Tensor(op, f1, f2)),
        [_arr("f1", 3), _arr("g1", 3, src=_tgt(f1)), _arr("f2", 3), _arr("g2", 3, src=_tgt(f2))])))
    add("(b nat)", _ops(lambda op: Variant(
        Comp(Tensor(op, Tensor(op, f, g), h), _bop(op)(FWD, _src(f), _src(g), _src(h))),
        Comp(_bop(op)(FWD, _tgt(f), _tgt(g), _tgt(h)), Tensor(op, f, Tensor(op, g, h))),
        [_arr("f", 3), _arr("g", 3), _arr("h", 3)])))
    add("(ĉ nat)", Variant(Comp(Tensor(AND, g, f), CHat(_src(f), _src(g))),
                           Comp(CHat(_tgt(f), _tgt(g)), Tensor(AND, f, g)), [_arr("f"), _arr("g")]))
    add("(č nat)", Variant(Comp(Tensor(OR, g, f), CCheck(_src(g), _src(f))),
                           Comp(CCheck(_tgt(g), _tgt(f)), Tensor(OR, f, g)), [_arr("f"), _arr("g")]))
    add("(d nat)", Variant(
        Comp(Tensor(OR, Tensor(AND, f, g), h), D(_src(f), _src(g), _src(h))),
        Comp(D(_tgt(f), _tgt(g), _tgt(h)), Tensor(AND, f, Tensor(OR, g, h))),
        [_arr("f", 3), _arr("g", 3), _arr("h", 3)]))
    add("(bb)", [dataclasses.replace(var, label=f"{op} {i}") for op in (AND, OR) for i, var in enumerate((
        Variant(Comp(_bop(op)(FWD, A, B, C), _bop(op)(BWD, A, B, C)), Id(Bin(op, Bin(op, A, B), C)),
                _forms("A", "B", "C")),
        Variant(Comp(_bop(op)(BWD, A, B, C), _bop(op)(FWD, A, B, C)), Id(Bin(op, A, Bin(op, B, C))),
                _forms("A", "B", "C"))))])

    def b5(op):
        bw = lambda a, b, c: _bop(op)(BWD, a, b, c)  # noqa: E731
        o = lambda a, b: Bin(op, a, b)  # noqa: E731
        return Variant(Comp(bw(A, B, o(C, Dm)), bw(o(A, B), C, Dm)),
                       ar.compose(Tensor(op, Id(A), bw(B, C, Dm)), bw(A, o(B, C), Dm),
                                  Tensor(op, bw(A, B, C), Id(Dm))),
                       _forms("A", "B", "C", "D", size=1))
    add("(b5)", _ops(b5))
    add("(ĉĉ)", Variant(Comp(CHat(B, A), CHat(A, B)), Id(Bin(AND, A, B)), _forms("A", "B")))
    add("(čč)", Variant(Comp(CCheck(A, B), CCheck(B, A)), Id(Bin(OR, A, B)), _forms("A", "B")))
    add("(b̂ĉ)", Variant(
        ar.compose(Tensor(AND, Id(B), CHat(C, A)), BHat(BWD, B, C, A), CHat(A, Bin(AND, B, C)),
                   BHat(BWD, A, B, C), Tensor(AND, CHat(B, A), Id(C))),
        BHat(BWD, B, A, C), _forms("A", "B", "C")))
    add("(b̌č)", Variant(
        ar.compose(Tensor(OR, Id(B), CCheck(A, C)), BCheck(BWD, B, C, A), CCheck(Bin(OR, B, C), A),
                   BCheck(BWD, A, B, C), Tensor(OR, CCheck(A, B), Id(C))),
        BCheck(BWD, B, A, C), _forms("A", "B", "C")))
    add("(d∧)", Variant(
        Comp(Tensor(OR, BHat(BWD, A, B, C), Id(Dm)), D(Bin(AND, A, B), C, Dm)),
        ar.compose(D(A, Bin(AND, B, C), Dm), Tensor(AND, Id(A), D(B, C, Dm)), BHat(BWD, A, B, Bin(OR, C, Dm))),
        _forms("A", "B", "C", "D", size=1)))
    add("(d∨)", Variant(
        Comp(D(Dm, C, Bin(OR, B, A)), Tensor(AND, Id(Dm), BCheck(BWD, C, B, A))),
        ar.compose(BCheck(BWD, Bin(AND, Dm, C), B, A), Tensor(OR, D(Dm, C, B), Id(A)), D(Dm, Bin(OR, C, B), A)),
        _forms("A", "B", "C", "D", size=1)))
    add("(db̂)", Variant(
        Comp(_dr(Bin(AND, A, B), C, Dm), Tensor(AND, D(A, B, C), Id(Dm))),
        ar.compose(D(A, B, Bin(AND, C, Dm)), Tensor(AND, Id(A), _dr(B, C, Dm)), BHat(BWD, A, Bin(OR, B, C), Dm)),
        _forms("A", "B", "C", "D", size=1)))
    add("(db̌)", Variant(
        Comp(Tensor(OR, Id(Dm), D(C, B, A)), _dr(Dm, C, Bin(OR, B, A))),
        ar.compose(BCheck(BWD, Dm, Bin(AND, C, B), A), Tensor(OR, _dr(Dm, C, B), Id(A)), D(Bin(OR, Dm, C), B, A)),
        _forms("A", "B", "C", "D", size=1)))

    # quantificational
    for q, qn in ((ALL, "∀"), (SOME, "∃")):
        add(f"(Q1) {qn}", Variant(QArrow(q, x, Id(A)), Id(Quant(q, x, A)), [("vars", [x])] + _forms("A")))
        add(f"(Q2) {qn}", Variant(QArrow(q, x, Comp(g, f)), Comp(QArrow(q, x, g), QArrow(q, x, f)),
                                  [("vars", [x]), _arr("f"), _arr("g", src=_tgt(f))]))
    add("(∀ι nat)", Variant(Comp(f, IotaAll(x, _src(f))), Comp(IotaAll(x, _tgt(f)), QArrow(ALL, x, f)),
                            [("vars", [x]), _arr("f")]))
    add("(∃ι nat)", Variant(Comp(QArrow(SOME, x, f), IotaEx(x, _src(f))), Comp(IotaEx(x, _tgt(f)), f),
                            [("vars", [x]), _arr("f")]))
    add("(∀γ nat)", Variant(Comp(QArrow(ALL, x, f), GammaAll(x, _src(f))), Comp(GammaAll(x, _tgt(f)), f),
                            [("vars", [x]), _arr("f", avoid=(x,))]))
    add("(∃γ nat)", Variant(Comp(f, GammaEx(x, _src(f))), Comp(GammaEx(x, _tgt(f)), QArrow(SOME, x, f)),
                            [("vars", [x]), _arr("f", avoid=(x,))]))
    add("(∀β)", Variant(Comp(IotaAll(x, A), GammaAll(x, A)), Id(A), [("vars", [x])] + _forms("A", avoid=(x,))))
    add("(∃β)", Variant(Comp(GammaEx(x, A), IotaEx(x, A)), Id(A), [("vars", [x])] + _forms("A", avoid=(x,))))
    add("(∀η)", Variant(Comp(QArrow(ALL, x, IotaAll(x, A)), GammaAll(x, Quant(ALL, x, A))),
                        Id(Quant(ALL, x, A)), [("vars", [x])] + _forms("A")))
    add("(∃η)", Variant(Comp(GammaEx(x, Quant(SOME, x, A)), QArrow(SOME, x, IotaEx(x, A))),
                        Id(Quant(SOME, x, A)), [("vars", [x])] + _forms("A")))
    qslots = [("vars", [x])] + _forms("A") + _forms("D", avoid=(x,))
    add("(Qθθ)", [
        Variant(Comp(_theta("all<", x, A, Dm), ThetaAll(x, A, Dm)), Id(Quant(ALL, x, Bin(OR, A, Dm))),
                qslots, label="∀ 1"),
        Variant(Comp(ThetaAll(x, A, Dm), _theta("all<", x, A, Dm)),
                Id(Bin(OR, Quant(ALL, x, A), Dm)), qslots, label="∀ 2"),
        Variant(Comp(ThetaEx(x, A, Dm), _theta("some>", x, A, Dm)), Id(Quant(SOME, x, Bin(AND, A, Dm))),
                qslots, label="∃ 1"),
        Variant(Comp(_theta("some>", x, A, Dm), ThetaEx(x, A, Dm)),
                Id(Bin(AND, Quant(SOME, x, A), Dm)), qslots, label="∃ 2"),
    ])

    # renaming
    xy = ("vars", [x, y])
    prims = [
        ("id", lambda s: Id(s("A")), ["A"], frozenset()),
        ("bhat+", lambda s: BHat(FWD, s("A"), s("B"), s("C")), ["A", "B", "C"], frozenset()),
        ("bhat-", lambda s: BHat(BWD, s("A"), s("B"), s("C")), ["A", "B", "C"], frozenset()),
        ("bcheck+", lambda s: BCheck(FWD, s("A"), s("B"), s("C")), ["A", "B", "C"], frozenset()),
        ("bcheck-", lambda s: BCheck(BWD, s("A"), s("B"), s("C")), ["A", "B", "C"], frozenset()),
        ("chat", lambda s: CHat(s("A"), s("B")), ["A", "B"], frozenset()),
        ("ccheck", lambda s: CCheck(s("A"), s("B")), ["A", "B"], frozenset()),
        ("d", lambda s: D(s("A"), s("B"), s("C")), ["A", "B", "C"], frozenset()),
        ("gamma-all", lambda s: GammaAll(z, s("A")), ["A"], frozenset()),
        ("gamma-ex", lambda s: GammaEx(z, s("A")), ["A"], frozenset()),
        ("theta-all", lambda s: ThetaAll(z, s("A"), s("B")), ["A", "B"], frozenset()),
        ("theta-ex", lambda s: ThetaEx(z, s("A"), s("B")), ["A", "B"], frozenset()),
        ("mix", lambda s: Mix(s("A"), s("B")), ["A", "B"], frozenset({"mix"})),
    ]
    ren_alpha = []
    for label, mk, names, req in prims:
        ren_alpha.append(Variant(Ren(x, y, mk(MF)), mk(lambda n: _sub(MF(n), x, y)),
                                 [("vars", [x, y, z])] + _forms(*names), requires=req, label=label,
                                 proviso=_distinct(x, y, z)))
    add("(ren α)", ren_alpha)
    add("(ren ∘)", Variant(Ren(x, y, Comp(g, f)), Comp(Ren(x, y, g), Ren(x, y, f)),
                           [xy, _arr("f"), _arr("g", src=_tgt(f))]))
    add("(ren ⋆)", _ops(lambda op: Variant(Ren(x, y, Tensor(op, f, g)), Tensor(op, Ren(x, y, f), Ren(x, y, g)),
                                           [xy, _arr("f"), _arr("g")])))
    add("(ren Q)", [Variant(Ren(x, y, QArrow(q, z, f)), QArrow(q, z, Ren(x, y, f)),
                            [("vars", [x, y, z]), _arr("f")], proviso=_distinct(x, y, z), label=q)
                    for q in (ALL, SOME)])
    add("(ren 1)", Variant(Ren(x, x, f), f, [("vars", [x]), _arr("f")]))
    add("(ren 2)", Variant(Ren(x, y, f), f, [xy, _arr("f", avoid=(x,))],
                           proviso=lambda i: i[x] not in i["f"].source.free | i["f"].target.free))
    xyzv = ("vars", [x, y, z, v])
    add("(ren 3)", Variant(Ren(x, y, Ren(z, v, f)), Ren(z, v, Ren(x, y, f)), [xyzv, _arr("f")], proviso=_distinct(x, y, z, v)))
    add("(ren 4)", Variant(Ren(x, y, Ren(z, y, f)), Ren(z, y, Ren(x, y, f)), [xyzv, _arr("f")], proviso=_distinct(x, y, z, v)))
    add("(ren 5)", Variant(Ren(x, y, Ren(z, x, f)), Ren(x, y, Ren(z, y, f)), [xyzv, _arr("f")], proviso=_distinct(x, y, z, v)))
    add("(ren 6)", Variant(Ren(x, y, Ren(y, x, f)), Ren(x, y, f), [xy, _arr("f")], proviso=_distinct(x, y)))

    # derived equations of the quantifier fragment
    add("(∀γι)", Variant(Comp(GammaAll(x, A), IotaAll(x, A)), Id(Quant(ALL, x, A)),
                         [("vars", [x])] + _forms("A", avoid=(x,))), derived=True)
    add("(∃γι)", Variant(Comp(IotaEx(x, A), GammaEx(x, A)), Id(Quant(SOME, x, A)),
                         [("vars", [x])] + _forms("A", avoid=(x,))), derived=True)
    add("(Qι)", [Variant(QArrow(ALL, x, IotaAll(x, A)), IotaAll(x, Quant(ALL, x, A)),
                         [("vars", [x])] + _forms("A"), label="∀"),
                 Variant(QArrow(SOME, x, IotaEx(x, A)), IotaEx(x, Quant(SOME, x, A)),
                         [("vars", [x])] + _forms("A"), label="∃")], derived=True)
    add("(Qγ)", [Variant(QArrow(ALL, x, GammaAll(x, A)), GammaAll(x, Quant(ALL, x, A)),
                         [("vars", [x])] + _forms("A", avoid=(x,)), label="∀"),
                 Variant(QArrow(SOME, x, GammaEx(x, A)), GammaEx(x, Quant(SOME, x, A)),
                         [("vars", [x])] + _forms("A", avoid=(x,)), label="∃")], derived=True)

    def ext_all(gen, inst):
        f0 = gen.arrow(gen.rng.randint(1, 3), frozenset({inst[x]}))
        t = Comp(GammaAll(inst[x], f0.target), f0)
        if gen.rng.random() < 0.5:
            t = Comp(QArrow(ALL, inst[x], gen.arrow_from(f0.target, 2)), t)
        inst["f"] = t

    def ext_ex(gen, inst):
        a = gen.formula(gen.rng.randint(0, 2))
        inst["g"] = gen.arrow_from(Quant(SOME, inst[x], a), gen.rng.randint(1, 4),
                                   frozenset({inst[x]}))

    add("(∀ ext)", Variant(
        Comp(QArrow(ALL, x, Comp(IotaAll(x, FF(body, (_tgt(f),))), f)), GammaAll(x, _src(f))), f,
        [("vars", [x]), ("custom", ext_all)]), derived=True)
    add("(∃ ext)", Variant(
        Comp(GammaEx(x, _tgt(g)), QArrow(SOME, x, Comp(g, IotaEx(x, FF(body, (_src(g),)))))), g,
        [("vars", [x]), ("custom", ext_ex)]), derived=True)
    vac = [("vars", [x])] + _forms("A", "D", avoid=(x,))
    add("(θ vac)", [
        Variant(ThetaAll(x, A, Dm), Comp(Tensor(OR, GammaAll(x, A), Id(Dm)), IotaAll(x, Bin(OR, A, Dm))),
                vac, label="∀"),
        Variant(ThetaEx(x, A, Dm), Comp(IotaEx(x, Bin(AND, A, Dm)), Tensor(AND, GammaEx(x, A), Id(Dm))),
                vac, label="∃"),
    ], derived=True)

    # change of bound variables; each tau is written on its base formula,
    # the instance at the variable bound by its iota
    pool4 = VAR_POOL[:4]

    def tau_pick(gen, inst, with_d=False):
        a = gen.formula(gen.rng.randint(0, 2))
        fv = sorted(a.free)
        bu = gen.rng.choice(fv) if fv and gen.rng.random() < 0.8 else gen.rng.choice(pool4)
        others = [p for p in pool4 if p not in a.free or p == bu]
        inst["A"], inst[u] = a, bu
        inst[v], inst[w] = gen.rng.choice(others), gen.rng.choice(others)
        if with_d:
            inst["D"] = gen.formula(gen.rng.randint(0, 1), frozenset({inst[u], inst[v]}))

    tslot = [("custom", tau_pick)]
    tslot_d = [("custom", lambda gen, inst: tau_pick(gen, inst, True))]
    add("(Qτ ref)", [Variant(_tau_all(A, u, u), Id(Quant(ALL, u, A)), tslot, label="∀"),
                     Variant(_tau_ex(A, u, u), Id(Quant(SOME, u, A)), tslot, label="∃")], derived=True)
    add("(Qτ sym)", [
        Variant(Comp(_tau_all(_sub(A, u, v), v, u), _tau_all(A, u, v)), Id(Quant(ALL, u, A)), tslot, label="∀"),
        Variant(Comp(_tau_ex(A, v, u), _tau_ex(_sub(A, u, v), u, v)), Id(Quant(SOME, u, A)), tslot, label="∃"),
    ], derived=True)
    add("(Qτ trans)", [
        Variant(Comp(_tau_all(_sub(A, u, v), v, w), _tau_all(A, u, v)), _tau_all(A, u, w), tslot, label="∀"),
        Variant(Comp(_tau_ex(A, v, w), _tau_ex(_sub(A, w, v), u, v)), _tau_ex(A, u, w), tslot, label="∃"),
    ], derived=True)

    def nat_pick(gen, inst):
        # f : A |- B with x free, u and v not free in A or B
        for _ in range(20):
            fa = gen.arrow(gen.rng.randint(1, 3))
            fv = sorted(fa.source.free & fa.target.free)
            others = [p for p in pool4 if p not in fa.source.free | fa.target.free]
            if fv and others:
                inst["f"] = fa
                inst[x] = gen.rng.choice(fv)
                inst[u] = gen.rng.choice(others)
                inst[v] = gen.rng.choice(others)
                return
        raise KernelError("retry")

    add("(Qτ nat)", [
        Variant(Comp(QArrow(ALL, v, Ren(x, v, f)), _tau_all(_sub(_src(f), x, u), u, v)),
                Comp(_tau_all(_sub(_tgt(f), x, u), u, v), QArrow(ALL, u, Ren(x, u, f))),
                [("custom", nat_pick)], proviso=_nat_tau_ok, label="∀"),
        Variant(Comp(QArrow(SOME, v, Ren(x, v, f)), _tau_ex(_sub(_src(f), x, v), u, v)),
                Comp(_tau_ex(_sub(_tgt(f), x, v), u, v), QArrow(SOME, u, Ren(x, u, f))),
                [("custom", nat_pick)], proviso=_nat_tau_ok, label="∃"),
    ], derived=True)

    def ren_pick(gen, inst):
        a = gen.formula(gen.rng.randint(1, 3))
        fv = sorted(a.free)
        if len(fv) < 2:
            raise KernelError("retry")
        inst[u], inst[y] = gen.rng.sample(fv, 2)
        rest = [p for p in pool4 if p not in a.free] + [inst[u]]
        inst[v] = gen.rng.choice(rest)
        inst[z] = gen.rng.choice([p for p in pool4 if p not in (inst[u], inst[v], inst[y])])
        inst["A"] = a

    add("(Qτ ren)", [
        Variant(Ren(y, z, _tau_all(A, u, v)), _tau_all(_sub(A, y, z), u, v), [("custom", ren_pick)], proviso=_ren_tau_ok, label="∀"),
        Variant(Ren(y, z, _tau_ex(A, u, v)), _tau_ex(_sub(A, y, z), u, v), [("custom", ren_pick)], proviso=_ren_tau_ok, label="∃"),
    ], derived=True)
    add("(∀τι)", Variant(Comp(IotaAll(v, _sub(A, u, v)), _tau_all(A, u, v)), Ren(u, v, IotaAll(u, A)), tslot),
        derived=True)
    add("(∃τι)", Variant(Comp(_tau_ex(A, v, u), IotaEx(v, _sub(A, u, v))), Ren(u, v, IotaEx(u, A)), tslot),
        derived=True)

    def tg_pick(gen, inst):
        a = gen.formula(gen.rng.randint(0, 2))
        others = [p for p in pool4 if p not in a.free]
        if not others:
            raise KernelError("retry")
        inst["A"] = a
        inst[u], inst[v] = gen.rng.choice(others), gen.rng.choice(others)

    add("(∀τγ)", Variant(Comp(_tau_all(A, u, v), GammaAll(u, A)), GammaAll(v, A), [("custom", tg_pick)]),
        derived=True)
    add("(∃τγ)", Variant(Comp(GammaEx(u, A), _tau_ex(A, v, u)), GammaEx(v, A), [("custom", tg_pick)]),
        derived=True)
    add("(∀τθ̌)", Variant(
        Comp(Tensor(OR, _tau_all(A, u, v), Id(Dm)), ThetaAll(u, A, Dm)),
        Comp(ThetaAll(v, _sub(A, u, v), Dm), _tau_all(Bin(OR, A, Dm), u, v)), tslot_d), derived=True)
    add("(∃τθ̂)", Variant(
        Comp(_tau_ex(_sub(Bin(AND, A, Dm), u, v), u, v), ThetaEx(u, A, Dm)),
        Comp(ThetaEx(v, _sub(A, u, v), Dm), Tensor(AND, _tau_ex(_sub(A, u, v), u, v), Id(Dm))), tslot_d),
        derived=True)
    add("(Qθι)", [
        Variant(Comp(IotaAll(x, Bin(OR, A, Dm)), _theta("all<", x, A, Dm)),
                Tensor(OR, IotaAll(x, A), Id(Dm)), qslots, label="∀"),
        Variant(Comp(_theta("some>", x, A, Dm), IotaEx(x, Bin(AND, A, Dm))),
                Tensor(AND, IotaEx(x, A), Id(Dm)), qslots, label="∃"),
    ], derived=True)
    add("(∀θ̌ι)", Variant(Comp(Tensor(OR, IotaAll(x, A), Id(Dm)), ThetaAll(x, A, Dm)),
                          IotaAll(x, Bin(OR, A, Dm)), qslots), derived=True)
    add("(∃θ̂ι)", Variant(Comp(ThetaEx(x, A, Dm), Tensor(AND, IotaEx(x, A), Id(Dm))),
                          IotaEx(x, Bin(AND, A, Dm)), qslots), derived=True)

    # proof-net additions
    dl = frozenset({"delta"})
    cslot = [("crown", "B")]
    add("(Δ nat)", Variant(Comp(Tensor(AND, f, Id(_crown_all(B))), DeltaAll(B, _src(f))),
                           Comp(DeltaAll(B, _tgt(f)), f), cslot + [_arr("f")]), system=S.QPN_NEG, requires=dl)
    add("(Σ nat)", Variant(Comp(f, SigmaEx(B, _src(f))),
                           Comp(SigmaEx(B, _tgt(f)), Tensor(OR, Id(_crown_ex(B)), f)), cslot + [_arr("f")]),
        system=S.QPN_NEG, requires=dl)
    add("(b̂Δ)", Variant(Comp(BHat(BWD, A, B, _crown_all(C)), DeltaAll(C, Bin(AND, A, B))),
                         Tensor(AND, Id(A), DeltaAll(C, B)), [("crown", "C")] + _forms("A", "B")),
        system=S.QPN_NEG, requires=dl)
    add("(b̌Σ)", Variant(Comp(SigmaEx(C, Bin(OR, B, A)), BCheck(BWD, _crown_ex(C), B, A)),
                         Tensor(OR, SigmaEx(C, B), Id(A)), [("crown", "C")] + _forms("A", "B")),
        system=S.QPN_NEG, requires=dl)
    add("(dΣ∀)", Variant(Comp(D(_crown_all(A), B, C), _xi("Sigma_all", A, Bin(OR, B, C))),
                         Tensor(OR, _xi("Sigma_all", A, B), Id(C)), [("crown", "A")] + _forms("B", "C")),
        system=S.QPN_NEG, requires=dl)
    add("(dΔ∃)", Variant(Comp(_xi("Delta_ex", A, Bin(AND, C, B)), D(C, B, _crown_ex(A))),
                         Tensor(AND, Id(C), _xi("Delta_ex", A, B)), [("crown", "A")] + _forms("B", "C")),
        system=S.QPN_NEG, requires=dl)
    add("(Σ̂Δ̌)", Variant(ar.compose(_xi("Sigma_hat", A, A), D(A, Neg(A), A), _xi("Delta_check", A, A)),
                          Id(A), [("crown", "A")]), system=S.QPN_NEG, requires=dl)
    add("(Σ̂′Δ̌′)", Variant(ar.compose(_xi("Sigma_hat1", A, Neg(A)), D(Neg(A), A, Neg(A)),
                                      _xi("Delta_check1", A, Neg(A))),
                           Id(Neg(A)), [("crown", "A")]), system=S.QPN_NEG, requires=dl)
    add("(ren Ξ)", [
        Variant(Ren(x, y, DeltaAll(B, A)), DeltaAll(B, _sub(A, x, y)), [xy, ("crown", "B")] + _forms("A"),
                label="Δ"),
        Variant(Ren(x, y, SigmaEx(B, A)), SigmaEx(B, _sub(A, x, y)), [xy, ("crown", "B")] + _forms("A"),
                label="Σ"),
    ], system=S.QPN_NEG, requires=dl)

    def xi_tau_pick(gen, inst):
        bv = gen.crown_index()
        vs = free_var_sequence(bv)
        rest = [p for p in pool4 if p not in vs]
        if len(vs) > len(rest):
            raise KernelError("retry")
        inst["B"], inst["U"] = bv, tuple(gen.rng.sample(rest, len(vs)))
        inst["A"] = gen.formula(gen.rng.randint(0, 2))

    Us = MF("U")
    fvs = lambda b_: tuple(free_var_sequence(b_))  # noqa: E731
    add("(Δτ)", Variant(
        DeltaAll(B, A),
        Comp(Tensor(AND, Id(A), FA(lambda b_, us: ar.tau_many(ALL, Bin(OR, Neg(b_), b_), fvs(b_), us, fvs(b_)),
                                   (B, Us))),
             DeltaAll(FF(lambda b_, us: _sub_many(b_, fvs(b_), us), (B, Us)), A)),
        [("custom", xi_tau_pick)], proviso=_fresh_seq_ok, complete=_fresh_seq), system=S.QPN_NEG, requires=dl)
    add("(Στ)", Variant(
        SigmaEx(B, A),
        Comp(SigmaEx(FF(lambda b_, us: _sub_many(b_, fvs(b_), us), (B, Us)), A),
             Tensor(OR, FA(lambda b_, us: ar.tau_many(SOME, Bin(AND, b_, Neg(b_)), fvs(b_), us, fvs(b_)),
                           (B, Us)), Id(A))),
        [("custom", xi_tau_pick)], proviso=_fresh_seq_ok, complete=_fresh_seq), system=S.QPN_NEG, requires=dl)

    # stem-increasing (derived)
    cw, ce = _crown_all(B), _crown_ex(B)
    st = [("vars", [x]), ("crown", "B")] + _forms("A")
    add("(∀Δ∀)", Variant(
        QArrow(ALL, x, DeltaAll(B, A)),
        ar.compose(QArrow(ALL, x, Tensor(AND, IotaAll(x, A), Id(cw))),
                   GammaAll(x, Bin(AND, Quant(ALL, x, A), cw)), DeltaAll(B, Quant(ALL, x, A))), st),
        system=S.QPN_NEG, derived=True, requires=dl)
    add("(∃Δ∀)", Variant(QArrow(SOME, x, DeltaAll(B, A)),
                         Comp(ThetaEx(x, A, cw), DeltaAll(B, Quant(SOME, x, A))), st),
        system=S.QPN_NEG, derived=True, requires=dl)
    add("(∀Σ∃)", Variant(
        QArrow(ALL, x, SigmaEx(B, A)),
        ar.compose(SigmaEx(B, Quant(ALL, x, A)), CCheck(ce, Quant(ALL, x, A)), ThetaAll(x, A, ce),
                   QArrow(ALL, x, CCheck(A, ce))), st),
        system=S.QPN_NEG, derived=True, requires=dl)
    add("(∃Σ∃)", Variant(
        QArrow(SOME, x, SigmaEx(B, A)),
        ar.compose(SigmaEx(B, Quant(SOME, x, A)), GammaEx(x, Bin(OR, ce, Quant(SOME, x, A))),
                   QArrow(SOME, x, Tensor(OR, Id(ce), IotaEx(x, A)))), st),
        system=S.QPN_NEG, derived=True, requires=dl)

    # theta definability and the double negation equation (derived, free negation)
    fn = frozenset({"delta", "freeneg"})
    nD = Neg(Dm)
    add("(θ def)", [
        Variant(ThetaAll(x, A, Dm), ar.compose(
            Tensor(OR, Comp(QArrow(ALL, x, Comp(_xi("Delta_hat", Dm, A), _dr(A, Dm, nD))),
                            _theta("all&<", x, Bin(OR, A, Dm), nD)), Id(Dm)),
            D(Quant(ALL, x, Bin(OR, A, Dm)), nD, Dm),
            _xi("Delta_check", Dm, Quant(ALL, x, Bin(OR, A, Dm)))), qslots, label="∀"),
        Variant(ThetaEx(x, A, Dm), ar.compose(
            _xi("Delta_hat1", Dm, Quant(SOME, x, Bin(AND, A, Dm))),
            _dr(Quant(SOME, x, Bin(AND, A, Dm)), nD, Dm),
            Tensor(AND, Comp(_theta("some|>", x, Bin(AND, A, Dm), nD),
                             QArrow(SOME, x, Comp(D(A, Dm, nD), _xi("Delta_check1", Dm, A)))), Id(Dm))),
            qslots, label="∃"),
    ], system=S.QPN_NEG, derived=True, requires=fn)
    add("(Δ∀ n)", Variant(
        DeltaAll(Neg(B), A),
        Comp(Tensor(AND, Id(A), FA(_crown_n, (B,))), _xi("Delta1_all", B, A)),
        [("crown", "B")] + _forms("A")), system=S.QPN_NEG, derived=True, requires=fn)

    # mix
    mx = frozenset({"mix"})
    add("(m nat)", Variant(Comp(Tensor(OR, f, g), Mix(_src(f), _src(g))),
                           Comp(Mix(_tgt(f), _tgt(g)), Tensor(AND, f, g)), [_arr("f"), _arr("g")]),
        system=S.QMDS, requires=mx)
    add("(b̂ m)", Variant(Comp(Mix(Bin(AND, A, B), C), BHat(FWD, A, B, C)),
                         Comp(D(A, B, C), Tensor(AND, Id(A), Mix(B, C))), _forms("A", "B", "C")),
        system=S.QMDS, requires=mx)
    add("(b̌ m)", Variant(Comp(BCheck(FWD, C, B, A), Mix(C, Bin(OR, B, A))),
                         Comp(Tensor(OR, Mix(C, B), Id(A)), D(C, B, A)), _forms("A", "B", "C")),
        system=S.QMDS, requires=mx)
    add("(c m)", Variant(Comp(Mix(B, A), CHat(A, B)), Comp(CCheck(B, A), Mix(A, B)), _forms("A", "B")),
        system=S.QMDS, requires=mx)
    return T


_TABLE: list[AxiomSchema] | None = None


def all_schemas() -> list[AxiomSchema]:
    global _TABLE
    if _TABLE is None:
        _TABLE = _build_table()
    return _TABLE


def axiom_schemas(system: System | str) -> list[AxiomSchema]:
    """Every schema with at least one variant stated in system."""
    system = System.parse(system)
    return [s for s in all_schemas() if s.available(system)]


def schema_by_name(name: str) -> AxiomSchema:
    for s in all_schemas():
        if s.name == name:
            return s
    raise KeyError(name)
