"""Random Gentzen terms for the pipeline tests."""

from __future__ import annotations

import random

from qcoh.generate import gen_random_arrow
from qcoh.gentzen import (
    Fresh, GRen, Gentzen, eliminate_cut, gentzenize, gsubterms, purify, term_vars, with_kids,
)


def pure_cut_free(system: str, seed: int, budget: int = 8) -> Gentzen:
    """A variable-pure, cut-free and renaming-free term."""
    f = gen_random_arrow(system, budget, seed, diversified=True)
    fresh = Fresh()
    _, core, _ = purify(gentzenize(f), fresh)
    return eliminate_cut(core, fresh=fresh)


def _free(t: Gentzen) -> set[str]:
    return set(t.source.free | t.target.free)


def with_renamings(t: Gentzen, rng: random.Random, count: int = 3) -> Gentzen:
    """t with renaming nodes inserted, still variable-pure and cut-free.

    Interior insertions are pairs [[s]^x_y]^y_x with y not free in s, so
    the subterm keeps its sequent; y is either fresh or a variable free
    elsewhere in t.  At the root one renaming may change the sequent."""
    fresh = Fresh(term_vars(t))
    everywhere = set().union(*(_free(s) for _, s in gsubterms(t)))
    paths = [p for p, s in gsubterms(t) if _free(s)]
    chosen = set(rng.sample(paths, min(count, len(paths))))

    def walk(s: Gentzen, path: tuple[int, ...]) -> Gentzen:
        kids = [walk(k, path + (i,)) for i, k in enumerate(s.kids)]
        s = with_kids(s, *kids) if kids else s
        if path in chosen:
            x = rng.choice(sorted(_free(s)))
            others = sorted(everywhere - _free(s))
            y = rng.choice(others) if others and rng.random() < 0.5 else fresh.var()
            s = GRen(y, x, GRen(x, y, s))
        return s

    out = walk(t, ())
    if _free(out) and rng.random() < 0.7:
        x = rng.choice(sorted(_free(out)))
        others = sorted(_free(out) - {x})
        y = rng.choice(others) if others and rng.random() < 0.5 else fresh.var()
        out = GRen(x, y, out)
    return out
