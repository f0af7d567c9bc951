"""Kelly-Mac Lane graphs: perfect matchings over the atom occurrences of
a sequent, the structural map from arrow terms to graphs, and
composition with loop discarding.

A graph over a source profile of length n and a target profile of length
m is stored as one partner array of length n + m: position p < n is the
source occurrence p, position n + j is the target occurrence j, and
``partner[p]`` is the position p is linked to.

Composition is the only numeric hot path.  It runs as a numba kernel
unless the environment variable ``QCOH_NO_NUMBA`` is set to a non-empty
value other than ``0``, in which case the same kernel runs as plain
Python over numpy arrays.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arrows import (
    Arrow, BCheck, BHat, CCheck, CHat, Comp, D, DeltaAll, GammaAll, GammaEx, Id,
    IotaAll, IotaEx, Mix, QArrow, Ren, SigmaEx, Tensor, ThetaAll, ThetaEx, crown_all,
    crown_ex,
)
from .errors import ProfileMismatch
from .lang import Formula, letter_profile

Profile = tuple[tuple[str, int], ...]


def _use_numba() -> bool:
    flag = os.environ.get("QCOH_NO_NUMBA", "")
    return flag in ("", "0")


def _compose_kernel(fp, na, nb, gp, nc):
    """Glue f (na + nb positions) and g (nb + nc positions) along the
    shared nb middle positions.  Returns the partner array of the
    composite over na + nc positions and the number of closed cycles
    confined to the middle."""
    out = np.full(na + nc, -1, dtype=np.int64)
    seen = np.zeros(nb, dtype=np.bool_)
    for start in range(na + nc):
        if out[start] >= 0:
            continue
        # side 0: we stand in f at position p; side 1: in g at position p
        if start < na:
            side = 0
            p = start
        else:
            side = 1
            p = nb + (start - na)
        while True:
            if side == 0:
                q = fp[p]
                if q < na:
                    end = q
                    break
                k = q - na
                seen[k] = True
                side = 1
                p = k
            else:
                q = gp[p]
                if q >= nb:
                    end = na + (q - nb)
                    break
                seen[q] = True
                side = 0
                p = na + q
        out[start] = end
        out[end] = start
    loops = 0
    for k0 in range(nb):
        if seen[k0]:
            continue
        loops += 1
        k = k0
        while not seen[k]:
            seen[k] = True
            # leave the middle into f, come back to the middle
            k = fp[na + k] - na
            seen[k] = True
            k = gp[k]
    return out, loops


_python_kernel = _compose_kernel


@lru_cache(maxsize=1)
def _jit_kernel():
    from numba import njit
    return njit(cache=True)(_compose_kernel)


def compose_kernel(fp: np.ndarray, na: int, nb: int, gp: np.ndarray, nc: int):
    if _use_numba():
        return _jit_kernel()(fp, na, nb, gp, nc)
    return _python_kernel(fp, na, nb, gp, nc)


@dataclass(eq=False)
class KMGraph:
    src: Profile
    tgt: Profile
    partner: np.ndarray
    loops: int = field(default=0)

    @property
    def n(self) -> int:
        return len(self.src)

    @property
    def m(self) -> int:
        return len(self.tgt)

    def label(self, p: int) -> str:
        return f"S{p}" if p < self.n else f"T{p - self.n}"

    def links(self) -> list[tuple[str, str]]:
        """Each link once, ordered by its lower position."""
        return [(self.label(p), self.label(int(q)))
                for p, q in enumerate(self.partner) if p < q]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KMGraph) and graph_eq(self, other)

    def __repr__(self) -> str:
        return f"KMGraph({to_text(self)}, loops={self.loops})"


def identity_graph(profile: Profile) -> KMGraph:
    n = len(profile)
    partner = np.concatenate([np.arange(n, 2 * n), np.arange(n)]).astype(np.int64)
    return KMGraph(tuple(profile), tuple(profile), partner)


def from_links(src: Profile, tgt: Profile, pairs: list[tuple[int, int]], loops: int = 0) -> KMGraph:
    partner = np.full(len(src) + len(tgt), -1, dtype=np.int64)
    for p, q in pairs:
        partner[p] = q
        partner[q] = p
    return KMGraph(tuple(src), tuple(tgt), partner, loops)


def compose_graphs(g: KMGraph, f: KMGraph) -> KMGraph:
    """g after f."""
    if f.tgt != g.src:
        raise ProfileMismatch(f"middle profiles differ: {f.tgt} vs {g.src}")
    out, loops = compose_kernel(f.partner, f.n, f.m, g.partner, g.m)
    return KMGraph(f.src, g.tgt, np.asarray(out, dtype=np.int64), f.loops + g.loops + int(loops))


def tensor_graphs(f: KMGraph, g: KMGraph) -> KMGraph:
    n1, m1, n2, m2 = f.n, f.m, g.n, g.m
    # old position -> new position, for f and g separately
    fmap = np.concatenate([np.arange(n1), n1 + n2 + np.arange(m1)])
    gmap = np.concatenate([n1 + np.arange(n2), n1 + n2 + m1 + np.arange(m2)])
    partner = np.empty(n1 + n2 + m1 + m2, dtype=np.int64)
    partner[fmap] = fmap[f.partner]
    partner[gmap] = gmap[g.partner]
    return KMGraph(f.src + g.src, f.tgt + g.tgt, partner, f.loops + g.loops)


def graph_eq(g1: KMGraph, g2: KMGraph) -> bool:
    """Equal profiles and equal links; loop counts are not compared."""
    return (g1.src == g2.src and g1.tgt == g2.tgt
            and bool(np.array_equal(g1.partner, g2.partner)))


def first_difference(g1: KMGraph, g2: KMGraph) -> dict | None:
    """A witness for inequality, or None when the graphs are equal."""
    for side, p1, p2 in (("source", g1.src, g2.src), ("target", g1.tgt, g2.tgt)):
        if p1 != p2:
            for i, (a, b) in enumerate(zip(p1, p2)):
                if a != b:
                    return {"kind": "profile", "side": side, "position": i,
                            "lhs": list(a), "rhs": list(b)}
            return {"kind": "profile", "side": side, "position": min(len(p1), len(p2)),
                    "lhs_length": len(p1), "rhs_length": len(p2)}
    for p in range(len(g1.partner)):
        if g1.partner[p] != g2.partner[p]:
            return {"kind": "link", "position": g1.label(p),
                    "lhs": [g1.label(p), g1.label(int(g1.partner[p]))],
                    "rhs": [g2.label(p), g2.label(int(g2.partner[p]))]}
    return None


def _block(profile: Profile, lo: int, hi: int) -> Profile:
    return profile[lo:hi]


def _swap_graph(first: Profile, second: Profile) -> KMGraph:
    """Source first ++ second, target second ++ first, blocks crossed."""
    a, b = len(first), len(second)
    n = a + b
    pairs = [(i, n + b + i) for i in range(a)] + [(a + j, n + j) for j in range(b)]
    return from_links(first + second, second + first, pairs)


def _graph(t: Arrow) -> KMGraph:
    if isinstance(t, Comp):
        return compose_graphs(_graph(t.g), _graph(t.f))
    if isinstance(t, Tensor):
        return tensor_graphs(_graph(t.f), _graph(t.g))
    if isinstance(t, (QArrow, Ren)):
        return _graph(t.f)
    if isinstance(t, (Id, BHat, BCheck, D, IotaAll, IotaEx, GammaAll, GammaEx,
                      ThetaAll, ThetaEx, Mix)):
        return identity_graph(letter_profile(t.type.source))
    if isinstance(t, CHat):
        return _swap_graph(letter_profile(t.a), letter_profile(t.b))
    if isinstance(t, CCheck):
        return _swap_graph(letter_profile(t.b), letter_profile(t.a))
    if isinstance(t, DeltaAll):
        stem = letter_profile(t.a)
        crown = letter_profile(crown_all(t.b))
        k, r = len(stem), len(crown) // 2
        pairs = [(i, k + i) for i in range(k)]
        pairs += [(2 * k + i, 2 * k + r + i) for i in range(r)]
        return from_links(stem, stem + crown, pairs)
    if isinstance(t, SigmaEx):
        stem = letter_profile(t.a)
        crown = letter_profile(crown_ex(t.b))
        k, r = len(stem), len(crown) // 2
        pairs = [(i, r + i) for i in range(r)]
        pairs += [(2 * r + j, 2 * r + k + j) for j in range(k)]
        return from_links(crown + stem, stem, pairs)
    raise TypeError(f"not an arrow term: {t!r}")


def graph_of(t: Arrow) -> KMGraph:
    """The graph of a well-typed term, by structural recursion."""
    t.type
    return _graph(t)


def profile_of(a: Formula) -> Profile:
    return letter_profile(a)


def is_wellformed(g: KMGraph) -> bool:
    """Perfect matching; linked occurrences share a letter; cross-side
    links join equal polarities and same-side links opposite ones."""
    total = g.n + g.m
    if len(g.partner) != total:
        return False
    labels = list(g.src) + list(g.tgt)
    for p in range(total):
        q = int(g.partner[p])
        if not 0 <= q < total or q == p or int(g.partner[q]) != p:
            return False
        (lp, pp), (lq, pq) = labels[p], labels[q]
        if lp != lq:
            return False
        cross = (p < g.n) != (q < g.n)
        if cross != (pp == pq):
            return False
    return True


def to_text(g: KMGraph, loops: bool = False) -> str:
    body = " ".join(f"{a}-{b}" for a, b in g.links())
    text = f"{g.n} {g.m} | {body}".rstrip()
    return f"{text} loops={g.loops}" if loops else text


def to_dot(g: KMGraph) -> str:
    lines = ["digraph G {", f"  loops={g.loops};"]
    for i, (letter, pol) in enumerate(g.src):
        lines.append(f'  s{i} [label="{letter}[{pol:+d}]"];')
    for j, (letter, pol) in enumerate(g.tgt):
        lines.append(f'  t{j} [label="{letter}[{pol:+d}]"];')
    for a, b in g.links():
        lines.append(f"  {a[0].lower()}{a[1:]} -> {b[0].lower()}{b[1:]} [dir=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
