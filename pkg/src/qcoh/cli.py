"""Command-line front end.

Every command reads its terms either inline (an argument that starts with
``(``) or from a UTF-8 file holding one term.  Errors are reported on
stderr and mapped to exit codes: 0 success or equal, 1 unequal, 2 type or
proviso error, 3 parse error, 4 precondition error.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .arrows import Arrow, typecheck
from .decide import decide_eq
from .errors import KernelError, ParseError
from .generate import Gen
from .gentzen import (
    Gentzen, Fresh, develop, eliminate_cut, gentzenize, parse_gentzen, print_gentzen, purify,
    term_vars,
)
from .graphs import graph_of, to_dot, to_text
from .lang import System
from .schemas import axiom_schemas, random_instance
from .sexpr import parse_arrow, print_arrow, read_sexpr
from .translate import negate_arrow, nnf_arrow

EXIT_OK, EXIT_UNEQUAL = 0, 1

_GENTZEN_HEADS = {"gid", "cut", "gand", "gor", "allL", "allR", "exL", "exR", "gren", "gmix"}


def _read(arg: str) -> str:
    if arg.lstrip().startswith("("):
        return arg
    try:
        return Path(arg).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {arg}: {exc.strerror}") from None


def _is_gentzen(text: str) -> bool:
    s = read_sexpr(text)
    return isinstance(s, list) and bool(s) and s[0] in _GENTZEN_HEADS


def _arrow(arg: str, system: System, arities: dict[str, int]) -> Arrow:
    t = parse_arrow(_read(arg), arities)
    typecheck(t, system)
    return t


def _gentzen(arg: str, system: System, arities: dict[str, int]) -> Gentzen:
    """A Gentzen term given directly, or the translation of an arrow term."""
    text = _read(arg)
    if _is_gentzen(text):
        t = parse_gentzen(text, arities)
        t.sequent
        return t
    f = parse_arrow(text, arities)
    typecheck(f, system)
    return gentzenize(f)


# --- selftest -------------------------------------------------------------------------

@dataclass
class SchemaRow:
    schema: str
    passed: int
    total: int
    seconds: float

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def run_selftest(system: System | str, count: int = 100, seed: int = 0,
                 max_formula: int = 6, max_size: int = 12) -> list[SchemaRow]:
    """Decide both sides of count random instances of every schema of
    system, no instantiated formula exceeding max_size.  Deterministic in
    seed."""
    system = System.parse(system)
    rows = []
    for k, schema in enumerate(axiom_schemas(system)):
        gen = Gen(seed * 100003 + k, system, max_formula=max_formula)
        t0 = time.perf_counter()
        passed = 0
        for _ in range(count):
            _, _, lhs, rhs = random_instance(schema, system, gen, max_size=max_size)
            passed += decide_eq(lhs, rhs, system).equal
        rows.append(SchemaRow(schema.name, passed, count, time.perf_counter() - t0))
    return rows


def _table(rows: list[SchemaRow]) -> str:
    width = max([len(r.schema) for r in rows] + [6])
    lines = [f"{'schema':<{width}}  passed  total  result"]
    for r in rows:
        lines.append(f"{r.schema:<{width}}  {r.passed:>6}  {r.total:>5}  {'PASS' if r.ok else 'FAIL'}")
    ok = sum(r.ok for r in rows)
    lines.append(f"{ok}/{len(rows)} schemas pass")
    return "\n".join(lines)


# --- commands ------------------------------------------------------------------------

def _cmd_check(a, system, arities):
    return str(_arrow(a.terms[0], system, arities).type), EXIT_OK


def _cmd_eq(a, system, arities):
    if len(a.terms) != 2:
        raise ParseError("eq takes two terms")
    f = parse_arrow(_read(a.terms[0]), arities)
    g = parse_arrow(_read(a.terms[1]), arities)
    v = decide_eq(f, g, system)
    code = EXIT_OK if v.equal else (EXIT_UNEQUAL if v.kind == "unequal" else KernelError.exit_code)
    return v.to_json(), code


def _cmd_graph(a, system, arities):
    return to_text(graph_of(_arrow(a.terms[0], system, arities)), loops=a.loops), EXIT_OK


def _cmd_dot(a, system, arities):
    return to_dot(graph_of(_arrow(a.terms[0], system, arities))).rstrip("\n"), EXIT_OK


def _cmd_cutelim(a, system, arities):
    t = _gentzen(a.terms[0], system, arities)
    return print_gentzen(eliminate_cut(t, fresh=Fresh(term_vars(t)))), EXIT_OK


def _cmd_purify(a, system, arities):
    t = _gentzen(a.terms[0], system, arities)
    _, core, _ = purify(t, Fresh(term_vars(t)))
    return print_gentzen(core), EXIT_OK


def _cmd_develop(a, system, arities):
    return print_arrow(develop(_arrow(a.terms[0], system, arities), system)), EXIT_OK


def _cmd_nnf(a, system, arities):
    f = _arrow(a.terms[0], system, arities)
    g = nnf_arrow(f)
    typecheck(g, System.QMPN if system.has_mix else System.QPN)
    return print_arrow(g), EXIT_OK


def _cmd_negate(a, system, arities):
    g = negate_arrow(_arrow(a.terms[0], system, arities))
    typecheck(g, system)
    return print_arrow(g), EXIT_OK


def _cmd_selftest(a, system, arities):
    rows = run_selftest(system, a.count, a.seed)
    return _table(rows), EXIT_OK if all(r.ok for r in rows) else EXIT_UNEQUAL


_COMMANDS = {
    "check": (_cmd_check, 1, "print the type of a term"),
    "eq": (_cmd_eq, 2, "decide equality of two terms; prints verdict JSON"),
    "graph": (_cmd_graph, 1, "print the graph of a term"),
    "dot": (_cmd_dot, 1, "print the graph of a term in DOT"),
    "cutelim": (_cmd_cutelim, 1, "cut-free Gentzen term (input: Gentzen or arrow term)"),
    "purify": (_cmd_purify, 1, "variable-pure Gentzen term (input: Gentzen or arrow term)"),
    "develop": (_cmd_develop, 1, "developed arrow term"),
    "nnf": (_cmd_nnf, 1, "translation into negation normal form"),
    "negate": (_cmd_negate, 1, "contravariant negation of a term"),
    "selftest": (_cmd_selftest, 0, "check random instances of every axiom schema"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qcoh", description="Proof terms and graphs for quantified dissociative and "
        "proof-net categories.  A term argument starting with '(' is inline; "
        "anything else is a file path.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, nterms, help_) in _COMMANDS.items():
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.add_argument("--system", required=True, choices=[s.value for s in System])
        sp.add_argument("--out", help="write the result to this file instead of stdout")
        if name in ("graph",):
            sp.add_argument("--loops", action="store_true", help="include the loop count")
        if name == "selftest":
            sp.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
            sp.add_argument("--count", type=int, default=100,
                            help="instances per schema (default 100)")
            sp.set_defaults(terms=[])
        else:
            sp.add_argument("terms", nargs=nterms, metavar="TERM")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    system = System.parse(args.system)
    handler = _COMMANDS[args.command][0]
    try:
        text, code = handler(args, system, {})
    except KernelError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
