"""The nine acceptance criteria.  Each test prints one PASS/FAIL line."""

import random
import time

import pytest

from oracle import oracle_links, trace
from qcoh.arrows import CHat, BHat, D, FWD, Id, Mix, compose, typecheck, xi_family
from qcoh.cli import run_selftest
from qcoh.decide import and_or_violations, decide_eq, or_and_violations, rewrite_chain
from qcoh.generate import gen_random_arrow
from qcoh.gentzen import (
    EXIST, FREE, UNIV, Fresh, compute_clusters, denote, denote_as, eliminate_cut,
    eliminate_renaming, gentzenize, is_cut_free, is_renaming_free, is_variable_pure,
    parse_gentzen, purify, skeleton,
)
from qcoh.errors import NotVariablePure
from qcoh.graphs import graph_eq, graph_of
from qcoh.lang import System, check_system, parse_formula
from qcoh.translate import build_iso, nnf_arrow
from termgen import pure_cut_free, with_renamings

SYSTEMS = [s.value for s in System]
ARITIES = {"R": 2, "P": 1}


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    return emit


def F(text):
    return parse_formula(text)


def test_1_axiom_soundness(report):
    t0 = time.perf_counter()
    rows = run_selftest("qmpn-neg", count=100, seed=1, max_size=12)
    elapsed = time.perf_counter() - t0
    failed = [r.schema for r in rows if not r.ok]
    ok = not failed and elapsed <= 60
    report(1, ok, f"{len(rows)} schemas x 100 instances, {len(failed)} failing, {elapsed:.1f} s")
    assert not failed
    assert elapsed <= 60


def _cut_pipeline(f):
    gt = gentzenize(f)
    fresh = Fresh()
    h2, core, h1 = purify(gt, fresh)
    if is_cut_free(core):
        core = eliminate_renaming(core, fresh)
    steps = []
    out = eliminate_cut(core, trace=steps, fresh=fresh)
    problems = []
    if not (is_cut_free(out) and is_variable_pure(out) and is_renaming_free(out)):
        problems.append("shape")
    if out.sequent != core.sequent:
        problems.append("sequent")
    if not graph_eq(graph_of(denote(out)), graph_of(denote(core))):
        problems.append("graph")
    whole = compose(h2, denote(out), h1)
    if whole.type != gt.sequent or not graph_eq(graph_of(whole), graph_of(denote(gt))):
        problems.append("purification")
    if not graph_eq(graph_of(denote_as(gt, f.source, f.target)), graph_of(f)):
        problems.append("denotation")
    if not all(child < parent for parent, child in steps):
        problems.append("measure")
    return problems, len(steps)


def test_2_cut_elimination(report):
    failures, worst, reductions = [], 0.0, 0
    for seed in range(500):
        system = ("qds", "qmds")[seed % 2]
        f = gen_random_arrow(system, 4 + seed % 9, seed, diversified=True)
        t0 = time.perf_counter()
        problems, n = _cut_pipeline(f)
        worst = max(worst, time.perf_counter() - t0)
        reductions += n
        if problems:
            failures.append((seed, problems))
    ok = not failures and worst <= 1.0
    report(2, ok, f"500 seeds, {len(failures)} failing, {reductions} reduction steps, "
                  f"slowest {worst:.3f} s")
    assert failures == []
    assert worst <= 1.0


COUNTEREXAMPLE = "(gren u y (allL x {all y. R(x,y)} u (allL y {R(u,y)} z (gid {R(u,z)}))))"


def test_3_renaming_elimination(report):
    failures, with_ren = [], 0
    for seed in range(300):
        t = with_renamings(pure_cut_free(("qds", "qmds")[seed % 2], seed), random.Random(seed))
        assert is_variable_pure(t) and is_cut_free(t)
        with_ren += not is_renaming_free(t)
        out = eliminate_renaming(t)
        if not (is_renaming_free(out) and out.sequent == t.sequent
                and skeleton(out) == skeleton(t)
                and graph_eq(graph_of(denote(out)), graph_of(denote(t)))):
            failures.append(seed)
    rejected = False
    try:
        eliminate_renaming(parse_gentzen(COUNTEREXAMPLE, ARITIES))
    except NotVariablePure:
        rejected = True
    ok = not failures and rejected
    report(3, ok, f"300 terms ({with_ren} with renaming nodes), {len(failures)} failing, "
                  f"counterexample {'rejected' if rejected else 'accepted'}")
    assert failures == []
    assert rejected


def test_4_rewrite_closure(report):
    failures, steps = [], 0
    for k in range(500):
        system = SYSTEMS[k % len(SYSTEMS)]
        f = gen_random_arrow(system, 6, 10_000 + k)
        g, log = rewrite_chain(f, 1 + k % 10, system, k)
        steps += len(log)
        if not decide_eq(f, g, system).equal:
            failures.append(k)
    report(4, not failures, f"500 pairs, {steps} rewrite steps, {len(failures)} not equal")
    assert failures == []


def test_5_separation(report):
    p, np_ = F("P"), F("~P")
    cases = {
        "a": (CHat(p, p), Id(F("P & P")), "qds"),
        "b": (compose(xi_family("Delta_check", p, p), xi_family("Sigma_hat", p, p), D(p, np_, p)),
              Id(F("P & (~P | P)")), "qpn"),
        "c": (CHat(p, F("P & P")), BHat(FWD, p, p, p), "qds"),
    }
    witnesses = {}
    for name, (f, g, system) in cases.items():
        v = decide_eq(f, g, system)
        assert f.type == g.type
        witnesses[name] = v.witness if v.kind == "unequal" else None
    ok = all(w is not None and w["kind"] == "link" for w in witnesses.values())
    report(5, ok, "; ".join(f"({k}) {w['lhs']} vs {w['rhs']}" if w else f"({k}) equal"
                            for k, w in witnesses.items()))
    assert witnesses["a"] == {"kind": "link", "position": "S0", "lhs": ["S0", "T1"], "rhs": ["S0", "T0"]}
    assert ok


def test_6_nnf(report):
    t0 = time.perf_counter()
    failures = []
    for seed in range(200):
        f = gen_random_arrow("qpn-neg", 10, 20_000 + seed)
        g = nnf_arrow(f)
        check_system(g.source, "qpn")
        check_system(g.target, "qpn")
        typecheck(g, "qpn")
        i, _ = build_iso(f.source)
        _, j_inv = build_iso(f.target)
        back = compose(j_inv, g, i)
        if not (graph_eq(graph_of(g), graph_of(f)) and back.type == f.type
                and graph_eq(graph_of(back), graph_of(f))):
            failures.append(seed)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed <= 30
    report(6, ok, f"200 terms, {len(failures)} failing, {elapsed:.1f} s")
    assert failures == []
    assert elapsed <= 30


def test_7_lemmas(report):
    and_or_qds = sum(bool(and_or_violations(gen_random_arrow("qds", 10, s))) for s in range(1000))
    or_and = sum(bool(or_and_violations(gen_random_arrow(system, 10, s)))
                 for system in ("qds", "qmds") for s in range(1000))
    mix_hits = sum(bool(and_or_violations(gen_random_arrow("qmds", 10, s))) for s in range(1000))
    assert and_or_violations(Mix(F("P"), F("Q")))
    ok = and_or_qds == 0 and or_and == 0 and mix_hits > 0
    report(7, ok, f"and-or in QDS {and_or_qds}/1000, or-and in QDS+QMDS {or_and}/2000, "
                  f"and-or in QMDS {mix_hits}/1000")
    assert and_or_qds == 0
    assert or_and == 0
    assert mix_hits > 0


TWO_CLUSTERS = ("(exR z {R(u,z) & P(z)} (gand {R(u,y)} {P(y)} "
                "(allL x {R(u,x)} (gid {R(u,y)})) (gid {P(y)})))")
ONE_CLUSTER = ("(exR z {R(y,z) & P(z)} (gand {R(y,y)} {P(y)} "
               "(allL x {R(x,x)} (gid {R(y,y)})) (gid {P(y)})))")


def test_8_clusters(report):
    two = compute_clusters(parse_gentzen(TWO_CLUSTERS, ARITIES))
    one = compute_clusters(parse_gentzen(ONE_CLUSTER, ARITIES))
    examples = (sorted(map(sorted, two.cluster_names())) == [["P1", "R2"], ["R1"]]
                and len(one.clusters) == 1)
    failures, gated = [], 0
    forbidden = {(FREE, UNIV), (EXIST, UNIV), (EXIST, FREE)}
    for seed in range(500):
        t = pure_cut_free(("qds", "qmds")[seed % 2], 30_000 + seed)
        assert is_variable_pure(t) and is_cut_free(t) and is_renaming_free(t)
        rep = compute_clusters(t)
        bad = any(c.kind in forbidden for c in rep.couples)
        for k, cluster in enumerate(rep.clusters):
            kinds = {rep.couples[i].kind for i in cluster}
            if kinds & {(UNIV, UNIV), (EXIST, EXIST)} and not rep.eigengates[k]:
                bad = True
            if (FREE, FREE) in kinds and len(cluster) != 1:
                bad = True
            if rep.eigengates[k]:
                gated += 1
                if any(FREE in rep.couples[i].kind for i in cluster):
                    bad = True
        if bad:
            failures.append(seed)
    ok = examples and not failures
    report(8, ok, f"worked examples {'reproduced' if examples else 'differ'}, 500 terms "
                  f"({gated} eigengated clusters), {len(failures)} failing")
    assert examples
    assert failures == []


def test_9_oracle(report):
    failures = []
    for k in range(1000):
        system = SYSTEMS[k % len(SYSTEMS)]
        f = gen_random_arrow(system, 1 + k % 10, 40_000 + k)
        g = graph_of(f)
        n, m, _, loops = trace(f)
        if ((g.n, g.m) != (n, m) or {frozenset(l) for l in g.links()} != oracle_links(f)
                or g.loops != loops):
            failures.append(k)
    report(9, not failures, f"1000 terms, {len(failures)} disagreements")
    assert failures == []
