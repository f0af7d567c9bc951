"""Seeded random formulas and well-typed arrow terms.

Terms are grown forward: a random start term is extended by arrows whose
source is fixed, so composites always line up.  Provisos are enforced by
construction where cheap and by retry otherwise; a budget that runs out
degrades to an identity.
"""

from __future__ import annotations

import random

from .arrows import (
    BWD, FWD, Arrow, BCheck, BHat, CCheck, CHat, Comp, D, DeltaAll, GammaAll, GammaEx, Id,
    IotaAll, IotaEx, Mix, QArrow, Ren, SigmaEx, Tensor, ThetaAll, ThetaEx,
)
from .errors import KernelError
from .lang import ALL, AND, OR, SOME, Atom, Bin, Formula, Neg, Quant, System, subst

VARS = ("x", "y", "z", "w")
ARITIES = {"P": 1, "Q": 0, "R": 2, "S": 1}


class Gen:
    """Random generator bound to one system.

    With ``diversified=True`` every atom gets a letter never used before
    by this generator, so every formula it builds, and every type of every
    subterm of an arrow it builds, is diversified.
    """

    def __init__(self, seed: int | random.Random = 0, system: System | str = System.QDS,
                 diversified: bool = False, variables: tuple[str, ...] = VARS,
                 max_formula: int = 6):
        self.rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        self.system = System.parse(system)
        self.diversified = diversified
        self.vars = variables
        self.max_formula = max_formula
        self._letter = 0

    # --- formulas ---------------------------------------------------------

    def var(self, avoid: frozenset[str] = frozenset()) -> str:
        pool = [v for v in self.vars if v not in avoid]
        return self.rng.choice(pool or list(self.vars))

    def atom(self, avoid: frozenset[str] = frozenset()) -> Atom:
        if self.diversified:
            self._letter += 1
            name = f"P{self._letter}"
            arity = self.rng.choice((0, 1, 1, 2))
        else:
            name = self.rng.choice(sorted(ARITIES))
            arity = ARITIES[name]
        return Atom(name, tuple(self.var(avoid) for _ in range(arity)))

    def formula(self, size: int | None = None, avoid: frozenset[str] = frozenset()) -> Formula:
        """A formula with at most size connectives and quantifiers; no
        variable of avoid occurs free in it."""
        if size is None:
            size = self.rng.randint(0, self.max_formula)
        return self._formula(size, avoid)

    def _formula(self, size: int, avoid: frozenset[str]) -> Formula:
        grammar = self.system.neg_grammar
        if size <= 0:
            a = self.atom(avoid)
            if grammar != "none" and self.rng.random() < 0.3:
                return Neg(a)
            return a
        r = self.rng.random()
        if r < 0.25:
            x = self.rng.choice(self.vars)
            return Quant(self.rng.choice((ALL, SOME)), x, self._formula(size - 1, avoid - {x}))
        if grammar == "free" and r < 0.35:
            return Neg(self._formula(size - 1, avoid))
        left = self.rng.randint(0, size - 1)
        return Bin(self.rng.choice((AND, OR)), self._formula(left, avoid),
                   self._formula(size - 1 - left, avoid))

    def crown_index(self, avoid: frozenset[str] = frozenset()) -> Formula:
        if self.system.neg_grammar == "atomic":
            return self.atom()
        return self.formula(self.rng.randint(0, 2))

    # --- arrows -----------------------------------------------------------

    def arrow(self, budget: int = 8, avoid: frozenset[str] = frozenset()) -> Arrow:
        """A well-typed term of roughly budget nodes."""
        for _ in range(50):
            t = self._arrow(budget, avoid)
            if not (avoid & (t.source.free | t.target.free)):
                return t
        return Id(self.formula(0, avoid))

    def _arrow(self, budget: int, avoid: frozenset[str]) -> Arrow:
        if budget <= 1:
            return self.primitive(avoid)
        r = self.rng.random()
        if r < 0.4:
            left = self.rng.randint(1, budget - 1)
            f = self._arrow(left, avoid)
            return self.extend(f, budget - left, avoid)
        if r < 0.6:
            left = self.rng.randint(1, budget - 1)
            return Tensor(self.rng.choice((AND, OR)), self._arrow(left, avoid),
                          self._arrow(budget - left, avoid))
        if r < 0.75:
            x = self.rng.choice(self.vars)
            return QArrow(self.rng.choice((ALL, SOME)), x, self._arrow(budget - 1, avoid))
        if r < 0.85:
            f = self._arrow(budget - 1, avoid)
            return self.rename(f, avoid) or f
        return self.primitive(avoid)

    def rename(self, f: Arrow, avoid: frozenset[str]) -> Arrow | None:
        free = sorted(f.source.free | f.target.free)
        for _ in range(4):
            x = self.rng.choice(free) if free and self.rng.random() < 0.8 else self.var()
            y = self.var(avoid)
            t = Ren(x, y, f)
            if (subst(f.source, x, y) is not None and subst(f.target, x, y) is not None):
                return t
        return None

    def extend(self, f: Arrow, budget: int, avoid: frozenset[str]) -> Arrow:
        """g after f for a random g out of the target of f."""
        g = self.arrow_from(f.target, budget, avoid)
        return Comp(g, f)

    def arrow_from(self, a: Formula, budget: int = 4, avoid: frozenset[str] = frozenset()) -> Arrow:
        """A random term with source a."""
        if budget <= 0:
            return Id(a)
        r = self.rng.random()
        if r < 0.2 and budget >= 2:
            f = self.arrow_from(a, budget // 2, avoid)
            return self.extend(f, budget - budget // 2, avoid)
        if isinstance(a, Bin) and r < 0.45:
            return Tensor(a.op, self.arrow_from(a.left, (budget - 1) // 2, avoid),
                          self.arrow_from(a.right, (budget - 1) - (budget - 1) // 2, avoid))
        if isinstance(a, Quant) and r < 0.55:
            return QArrow(a.q, a.var, self.arrow_from(a.body, budget - 1, avoid - {a.var}))
        options = self.step_options(a, avoid)
        return self.rng.choice(options) if options else Id(a)

    def step_options(self, a: Formula, avoid: frozenset[str]) -> list[Arrow]:
        """Primitive arrows with source a."""
        out: list[Arrow] = [Id(a)]
        sysm = self.system
        if isinstance(a, Bin):
            l, r = a.left, a.right
            if a.op == AND:
                out.append(CHat(l, r))
                if isinstance(r, Bin) and r.op == AND:
                    out.append(BHat(FWD, l, r.left, r.right))
                if isinstance(l, Bin) and l.op == AND:
                    out.append(BHat(BWD, l.left, l.right, r))
                if isinstance(r, Bin) and r.op == OR:
                    out.append(D(l, r.left, r.right))
                if isinstance(l, Quant) and l.q == SOME and l.var not in r.free:
                    out.append(ThetaEx(l.var, l.body, r))
                if sysm.has_mix:
                    out.append(Mix(l, r))
            else:
                out.append(CCheck(r, l))
                if isinstance(r, Bin) and r.op == OR:
                    out.append(BCheck(FWD, l, r.left, r.right))
                if isinstance(l, Bin) and l.op == OR:
                    out.append(BCheck(BWD, l.left, l.right, r))
        if isinstance(a, Quant):
            if a.q == ALL:
                out.append(IotaAll(a.var, a.body))
                body = a.body
                if isinstance(body, Bin) and body.op == OR and a.var not in body.right.free:
                    out.append(ThetaAll(a.var, body.left, body.right))
            elif a.var not in a.body.free:
                out.append(GammaEx(a.var, a.body))
        x = self.rng.choice(self.vars)
        out.append(IotaEx(x, a))
        if x not in a.free:
            out.append(GammaAll(x, a))
        if sysm.has_delta:
            out.append(DeltaAll(self.crown_index(), a))
        return out

    def primitive(self, avoid: frozenset[str] = frozenset()) -> Arrow:
        """A primitive with random indices."""
        sysm = self.system
        kinds = ["id", "bhat", "bcheck", "chat", "ccheck", "d", "iota", "gamma", "theta"]
        if sysm.has_delta:
            kinds += ["delta", "sigma"]
        if sysm.has_mix:
            kinds.append("mix")
        kind = self.rng.choice(kinds)

        def f(size: int = 1) -> Formula:
            return self.formula(self.rng.randint(0, size), avoid)

        x = self.rng.choice(self.vars)
        if kind == "id":
            return Id(f(2))
        if kind in ("bhat", "bcheck"):
            cls = BHat if kind == "bhat" else BCheck
            return cls(self.rng.choice((FWD, BWD)), f(), f(), f())
        if kind == "chat":
            return CHat(f(), f())
        if kind == "ccheck":
            return CCheck(f(), f())
        if kind == "d":
            return D(f(), f(), f())
        if kind == "iota":
            body = self.formula(self.rng.randint(0, 2), avoid - {x})
            if self.rng.random() < 0.5:
                return IotaAll(x, body) if not (avoid & body.free) else Id(body)
            return IotaEx(x, body) if not (avoid & body.free) else Id(body)
        if kind == "gamma":
            body = self.formula(self.rng.randint(0, 2), avoid | {x})
            return GammaAll(x, body) if self.rng.random() < 0.5 else GammaEx(x, body)
        if kind == "theta":
            a = self.formula(self.rng.randint(0, 1), avoid - {x})
            d = self.formula(self.rng.randint(0, 1), avoid | {x})
            if avoid & a.free:
                return Id(d)
            return ThetaAll(x, a, d) if self.rng.random() < 0.5 else ThetaEx(x, a, d)
        if kind == "delta":
            return DeltaAll(self.crown_index(), f())
        if kind == "sigma":
            return SigmaEx(self.crown_index(), f())
        return Mix(f(), f())


def gen_random_arrow(system: System | str, size_budget: int, seed: int,
                     diversified: bool = False) -> Arrow:
    """A well-typed term, deterministic in seed."""
    g = Gen(seed, system, diversified=diversified)
    if size_budget <= 1:
        return Id(g.atom())
    for _ in range(20):
        try:
            t = g.arrow(size_budget)
            t.type
            return t
        except KernelError:
            continue
    return Id(g.atom())
