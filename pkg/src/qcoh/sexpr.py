"""S-expression syntax for arrow terms.

Formulas appear inside braces and use the formula grammar of
:mod:`qcoh.lang`; variables are bare identifiers.
"""

from __future__ import annotations

import re
from typing import Union

from .arrows import (
    BWD, FWD, Arrow, BCheck, BHat, CCheck, CHat, Comp, D, DeltaAll, GammaAll, GammaEx,
    Id, IotaAll, IotaEx, Mix, QArrow, Ren, SigmaEx, Tensor, ThetaAll, ThetaEx,
)
from .errors import ParseError
from .lang import ALL, AND, OR, SOME, Formula, parse_formula, print_formula

SExpr = Union[str, "Braced", list]


class Braced(str):
    """Raw text that stood between braces."""


_TOKEN = re.compile(r"\s*(?:(?P<open>\()|(?P<close>\))|\{(?P<brace>[^{}]*)\}|(?P<word>[^\s(){}]+))")


def read_sexpr(text: str) -> SExpr:
    pos, stack, result = 0, [[]], None
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group("open"):
            stack.append([])
        elif m.group("close"):
            if len(stack) < 2:
                raise ParseError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        elif m.group("brace") is not None:
            stack[-1].append(Braced(m.group("brace")))
        else:
            stack[-1].append(m.group("word"))
        if text[pos:].strip() == "":
            break
    if len(stack) != 1:
        raise ParseError("unbalanced '('")
    if len(stack[0]) != 1:
        raise ParseError("expected exactly one expression")
    result = stack[0][0]
    return result


_FORMULA_ARGS = {
    "id": (Id, 1), "chat": (CHat, 2), "ccheck": (CCheck, 2), "d": (D, 3),
    "delta-all": (DeltaAll, 2), "sigma-ex": (SigmaEx, 2), "mix": (Mix, 2),
}
_VAR_FORMULA = {
    "iota-all": (IotaAll, 1), "iota-ex": (IotaEx, 1), "gamma-all": (GammaAll, 1),
    "gamma-ex": (GammaEx, 1), "theta-all": (ThetaAll, 2), "theta-ex": (ThetaEx, 2),
}


class _Reader:
    def __init__(self, arities: dict[str, int] | None):
        self.arities = {} if arities is None else arities

    def formula(self, s: SExpr) -> Formula:
        if not isinstance(s, Braced):
            raise ParseError(f"expected {{formula}}, got {s!r}")
        return parse_formula(str(s), arities=self.arities)

    def var(self, s: SExpr) -> str:
        if not isinstance(s, str) or isinstance(s, Braced) or not re.fullmatch(r"[a-z][A-Za-z0-9_'$]*", s):
            raise ParseError(f"expected a variable, got {s!r}")
        return s

    def arrow(self, s: SExpr) -> Arrow:
        if not isinstance(s, list) or not s or isinstance(s[0], list):
            raise ParseError(f"expected an arrow term, got {s!r}")
        head, args = s[0], s[1:]

        def need(n: int) -> None:
            if len(args) != n:
                raise ParseError(f"({head} ...) takes {n} arguments, got {len(args)}")

        if head in _FORMULA_ARGS:
            cls, n = _FORMULA_ARGS[head]
            need(n)
            return cls(*(self.formula(a) for a in args))
        if head in ("bhat+", "bhat-", "bcheck+", "bcheck-"):
            need(3)
            cls = BHat if head.startswith("bhat") else BCheck
            return cls(FWD if head.endswith("+") else BWD, *(self.formula(a) for a in args))
        if head in _VAR_FORMULA:
            cls, n = _VAR_FORMULA[head]
            need(n + 1)
            return cls(self.var(args[0]), *(self.formula(a) for a in args[1:]))
        if head == "comp":
            need(2)
            return Comp(self.arrow(args[0]), self.arrow(args[1]))
        if head in ("and", "or"):
            need(2)
            return Tensor(AND if head == "and" else OR, self.arrow(args[0]), self.arrow(args[1]))
        if head in ("all", "ex"):
            need(2)
            return QArrow(ALL if head == "all" else SOME, self.var(args[0]), self.arrow(args[1]))
        if head == "ren":
            need(3)
            return Ren(self.var(args[0]), self.var(args[1]), self.arrow(args[2]))
        raise ParseError(f"unknown arrow constructor {head!r}")


def parse_arrow(text: str, arities: dict[str, int] | None = None) -> Arrow:
    return _Reader(arities).arrow(read_sexpr(text))


def _f(a: Formula) -> str:
    return "{" + print_formula(a) + "}"


_NAMES = {Id: "id", CHat: "chat", CCheck: "ccheck", D: "d", DeltaAll: "delta-all",
          SigmaEx: "sigma-ex", Mix: "mix", IotaAll: "iota-all", IotaEx: "iota-ex",
          GammaAll: "gamma-all", GammaEx: "gamma-ex", ThetaAll: "theta-all", ThetaEx: "theta-ex"}


def print_arrow(t: Arrow) -> str:
    if isinstance(t, (Id,)):
        return f"(id {_f(t.a)})"
    if isinstance(t, (BHat, BCheck)):
        head = ("bhat" if isinstance(t, BHat) else "bcheck") + t.dir
        return f"({head} {_f(t.a)} {_f(t.b)} {_f(t.c)})"
    if isinstance(t, (CHat, CCheck, Mix)):
        return f"({_NAMES[type(t)]} {_f(t.a)} {_f(t.b)})"
    if isinstance(t, D):
        return f"(d {_f(t.a)} {_f(t.b)} {_f(t.c)})"
    if isinstance(t, (DeltaAll, SigmaEx)):
        return f"({_NAMES[type(t)]} {_f(t.b)} {_f(t.a)})"
    if isinstance(t, (IotaAll, IotaEx)):
        return f"({_NAMES[type(t)]} {t.x} {_f(t.a)})"
    if isinstance(t, (GammaAll, GammaEx)):
        return f"({_NAMES[type(t)]} {t.x} {_f(t.d)})"
    if isinstance(t, (ThetaAll, ThetaEx)):
        return f"({_NAMES[type(t)]} {t.x} {_f(t.a)} {_f(t.d)})"
    if isinstance(t, Comp):
        return f"(comp {print_arrow(t.g)} {print_arrow(t.f)})"
    if isinstance(t, Tensor):
        return f"({'and' if t.op == AND else 'or'} {print_arrow(t.f)} {print_arrow(t.g)})"
    if isinstance(t, QArrow):
        return f"({'all' if t.q == ALL else 'ex'} {t.x} {print_arrow(t.f)})"
    if isinstance(t, Ren):
        return f"(ren {t.x} {t.y} {print_arrow(t.f)})"
    raise TypeError(f"not an arrow term: {t!r}")
