"""Proof terms, Kelly-Mac Lane graphs and normalization for the
quantified dissociative and proof-net categories."""

from .lang import System, parse_formula, print_formula
from .arrows import typecheck
from .sexpr import parse_arrow, print_arrow
from .graphs import graph_of

__all__ = ["System", "parse_formula", "print_formula", "typecheck", "parse_arrow",
           "print_arrow", "graph_of"]
__version__ = "0.1.0"
