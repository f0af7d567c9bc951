"""Formulas of the first-order object languages and their syntax.

Three grammars share one AST: the negation-free language of the
distributive systems, the language with unrestricted negation, and the
language where negation may only sit directly on an atom.  Atom
arguments are variables; there are no function symbols or constants.
Substitution is partial and never renames bound variables.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .errors import ParseError, SystemViolation

AND = "&"
OR = "|"
ALL = "all"
SOME = "some"


class System(enum.Enum):
    QDS = "qds"
    QMDS = "qmds"
    QPN_NEG = "qpn-neg"
    QMPN_NEG = "qmpn-neg"
    QPN = "qpn"
    QMPN = "qmpn"

    @property
    def has_mix(self) -> bool:
        return self in (System.QMDS, System.QMPN_NEG, System.QMPN)

    @property
    def has_delta(self) -> bool:
        return self not in (System.QDS, System.QMDS)

    @property
    def neg_grammar(self) -> str:
        """'none', 'free' or 'atomic'."""
        if self in (System.QDS, System.QMDS):
            return "none"
        if self in (System.QPN_NEG, System.QMPN_NEG):
            return "free"
        return "atomic"

    @classmethod
    def parse(cls, name: "str | System") -> "System":
        if isinstance(name, System):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise SystemViolation(f"unknown system {name!r}") from None


class Formula:
    """Base class; concrete nodes are the frozen dataclasses below."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)

    def __and__(self, other: "Formula") -> "Formula":
        return Bin(AND, self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Bin(OR, self, other)

    def __invert__(self) -> "Formula":
        return Neg(self)


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple[str, ...] = ()

    @cached_property
    def free(self) -> frozenset[str]:
        return frozenset(self.args)

    @cached_property
    def binders(self) -> frozenset[str]:
        return frozenset()

    @cached_property
    def size(self) -> int:
        return 1


@dataclass(frozen=True)
class Neg(Formula):
    body: Formula

    @cached_property
    def free(self) -> frozenset[str]:
        return self.body.free

    @cached_property
    def binders(self) -> frozenset[str]:
        return self.body.binders

    @cached_property
    def size(self) -> int:
        return 1 + self.body.size


@dataclass(frozen=True)
class Bin(Formula):
    op: str
    left: Formula
    right: Formula

    @cached_property
    def free(self) -> frozenset[str]:
        return self.left.free | self.right.free

    @cached_property
    def binders(self) -> frozenset[str]:
        return self.left.binders | self.right.binders

    @cached_property
    def size(self) -> int:
        return 1 + self.left.size + self.right.size


@dataclass(frozen=True)
class Quant(Formula):
    q: str
    var: str
    body: Formula

    @cached_property
    def free(self) -> frozenset[str]:
        return self.body.free - {self.var}

    @cached_property
    def binders(self) -> frozenset[str]:
        return self.body.binders | {self.var}

    @cached_property
    def size(self) -> int:
        return 1 + self.body.size


def And(a: Formula, b: Formula) -> Bin:
    return Bin(AND, a, b)


def Or(a: Formula, b: Formula) -> Bin:
    return Bin(OR, a, b)


def All(x: str, a: Formula) -> Quant:
    return Quant(ALL, x, a)


def Ex(x: str, a: Formula) -> Quant:
    return Quant(SOME, x, a)


def dual_q(q: str) -> str:
    return SOME if q == ALL else ALL


def dual_op(op: str) -> str:
    return OR if op == AND else AND


# --- variables -------------------------------------------------------------

def free_vars(a: Formula) -> frozenset[str]:
    return a.free


def is_free_in(x: str, a: Formula) -> bool:
    return x in a.free


def is_bound_in(x: str, a: Formula) -> bool:
    """True when some quantifier on x occurs in a, vacuous or not."""
    return x in a.binders


def free_var_sequence(a: Formula) -> list[str]:
    seen: list[str] = []

    def walk(f: Formula, bound: frozenset[str]) -> None:
        if isinstance(f, Atom):
            for v in f.args:
                if v not in bound and v not in seen:
                    seen.append(v)
        elif isinstance(f, Neg):
            walk(f.body, bound)
        elif isinstance(f, Bin):
            walk(f.left, bound)
            walk(f.right, bound)
        else:
            walk(f.body, bound | {f.var})

    walk(a, frozenset())
    return seen


def all_vars(a: Formula) -> frozenset[str]:
    """Every variable that occurs in a, free, bound or as a binder."""
    if isinstance(a, Atom):
        return frozenset(a.args)
    if isinstance(a, Neg):
        return all_vars(a.body)
    if isinstance(a, Bin):
        return all_vars(a.left) | all_vars(a.right)
    return all_vars(a.body) | {a.var}


def subst(a: Formula, x: str, y: str) -> Formula | None:
    """a with y for the free occurrences of x, or None when y would be
    captured.  None plays the role of the undefined value."""
    if x == y or x not in a.free:
        return a
    if isinstance(a, Atom):
        return Atom(a.pred, tuple(y if v == x else v for v in a.args))
    if isinstance(a, Neg):
        b = subst(a.body, x, y)
        return None if b is None else Neg(b)
    if isinstance(a, Bin):
        left = subst(a.left, x, y)
        if left is None:
            return None
        right = subst(a.right, x, y)
        return None if right is None else Bin(a.op, left, right)
    if a.var == y:
        return None
    b = subst(a.body, x, y)
    return None if b is None else Quant(a.q, a.var, b)


def subst_many(a: Formula, xs: list[str], ys: list[str]) -> Formula | None:
    """Sequential substitution, first pair applied first."""
    for x, y in zip(xs, ys):
        a = subst(a, x, y)
        if a is None:
            return None
    return a


def rename_bound(a: Formula, mapping: dict[str, str]) -> Formula:
    """Rename every binder in a through mapping, with its bound
    occurrences; free occurrences stay as they are."""

    def walk(f: Formula, env: dict[str, str]) -> Formula:
        if isinstance(f, Atom):
            return Atom(f.pred, tuple(env.get(v, v) for v in f.args))
        if isinstance(f, Neg):
            return Neg(walk(f.body, env))
        if isinstance(f, Bin):
            return Bin(f.op, walk(f.left, env), walk(f.right, env))
        new = mapping.get(f.var, f.var)
        inner = dict(env)
        inner[f.var] = new
        return Quant(f.q, new, walk(f.body, inner))

    return walk(a, {})


# --- atom occurrences --------------------------------------------------------

class AtomOccurrence(NamedTuple):
    position: int
    letter: str
    polarity: int
    args: tuple[str, ...]


def iter_atoms(a: Formula, polarity: int = 1) -> Iterator[tuple[Atom, int]]:
    if isinstance(a, Atom):
        yield a, polarity
    elif isinstance(a, Neg):
        yield from iter_atoms(a.body, -polarity)
    elif isinstance(a, Bin):
        yield from iter_atoms(a.left, polarity)
        yield from iter_atoms(a.right, polarity)
    else:
        yield from iter_atoms(a.body, polarity)


def atom_profile(a: Formula) -> list[AtomOccurrence]:
    return [AtomOccurrence(i, at.pred, pol, at.args)
            for i, (at, pol) in enumerate(iter_atoms(a))]


def letter_profile(a: Formula) -> tuple[tuple[str, int], ...]:
    """Letters with polarities, the part of a profile graphs compare."""
    return tuple((at.pred, pol) for at, pol in iter_atoms(a))


def count_atoms(a: Formula) -> int:
    if isinstance(a, Atom):
        return 1
    if isinstance(a, (Neg, Quant)):
        return count_atoms(a.body)
    return count_atoms(a.left) + count_atoms(a.right)


def letters(a: Formula) -> list[str]:
    return [at.pred for at, _ in iter_atoms(a)]


def is_diversified(a: Formula) -> bool:
    ls = letters(a)
    return len(ls) == len(set(ls))


def map_atoms(a: Formula, fn) -> Formula:
    """Rebuild a with every atom replaced by fn(atom)."""
    if isinstance(a, Atom):
        return fn(a)
    if isinstance(a, Neg):
        return Neg(map_atoms(a.body, fn))
    if isinstance(a, Bin):
        return Bin(a.op, map_atoms(a.left, fn), map_atoms(a.right, fn))
    return Quant(a.q, a.var, map_atoms(a.body, fn))


# --- system grammars ---------------------------------------------------------

def check_system(a: Formula, system: System | str) -> None:
    system = System.parse(system)
    mode = system.neg_grammar

    def walk(f: Formula) -> None:
        if isinstance(f, Neg):
            if mode == "none":
                raise SystemViolation(f"negation is not available in {system.value}: {f}")
            if mode == "atomic" and not isinstance(f.body, Atom):
                raise SystemViolation(f"negation only on atoms in {system.value}: {f}")
            walk(f.body)
        elif isinstance(f, Bin):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, Quant):
            walk(f.body)

    walk(a)


def check_arities(a: Formula, arities: dict[str, int]) -> None:
    for at, _ in iter_atoms(a):
        known = arities.setdefault(at.pred, len(at.args))
        if known != len(at.args):
            raise ParseError(f"{at.pred} used with arity {len(at.args)}, expected {known}")


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<kw>all|some)(?![A-Za-z0-9_'$])"
                    r"|(?P<pred>[A-Z][A-Za-z0-9_']*)"
                    r"|(?P<var>[a-z][A-Za-z0-9_'$]*)"
                    r"|(?P<sym>[&|~().,]))")


def tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, arities: dict[str, int]):
        self.toks = tokenize(text)
        self.i = 0
        self.arities = arities

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, value: str | None = None, kind: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input, expected {value or kind}")
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok[1]

    def formula(self) -> Formula:
        items = [self.quant()]
        op = None
        while (tok := self.peek()) is not None and tok[1] in (AND, OR):
            if op is not None and tok[1] != op:
                raise ParseError("mixing & and | needs parentheses")
            op = self.take()
            items.append(self.quant())
        result = items[-1]
        for item in reversed(items[:-1]):
            result = Bin(op, item, result)
        return result

    def quant(self) -> Formula:
        tok = self.peek()
        if tok is not None and tok[0] == "kw":
            q = self.take()
            x = self.take(kind="var")
            self.take(".")
            return Quant(q, x, self.quant())
        return self.unary()

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if tok[1] == "~":
            self.take()
            return Neg(self.quant())
        if tok[1] == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok[0] == "pred":
            name = self.take()
            args: list[str] = []
            if (nxt := self.peek()) is not None and nxt[1] == "(":
                self.take()
                args.append(self.take(kind="var"))
                while self.peek() is not None and self.peek()[1] == ",":
                    self.take()
                    args.append(self.take(kind="var"))
                self.take(")")
            known = self.arities.setdefault(name, len(args))
            if known != len(args):
                raise ParseError(f"{name} used with arity {len(args)}, expected {known}")
            return Atom(name, tuple(args))
        raise ParseError(f"unexpected token {tok[1]!r}")


def parse_formula(text: str, system: System | str | None = None,
                  arities: dict[str, int] | None = None) -> Formula:
    p = _Parser(text, {} if arities is None else arities)
    f = p.formula()
    if p.peek() is not None:
        raise ParseError(f"trailing input at {p.peek()[1]!r}")
    if system is not None:
        check_system(f, system)
    return f


# --- printing ----------------------------------------------------------------

def print_formula(a: Formula) -> str:
    return _fmt_formula(a)


def _fmt_formula(a: Formula) -> str:
    if not isinstance(a, Bin):
        return _fmt_quant(a)
    left = _fmt_quant(a.left)
    if isinstance(a.right, Bin) and a.right.op == a.op:
        right = _fmt_formula(a.right)
    else:
        right = _fmt_quant(a.right)
    return f"{left} {a.op} {right}"


def _fmt_quant(a: Formula) -> str:
    if isinstance(a, Quant):
        return f"{a.q} {a.var}. {_fmt_quant(a.body)}"
    if isinstance(a, Bin):
        return f"({_fmt_formula(a)})"
    return _fmt_unary(a)


def _fmt_unary(a: Formula) -> str:
    if isinstance(a, Atom):
        return f"{a.pred}({','.join(a.args)})" if a.args else a.pred
    return "~" + _fmt_quant(a.body)
