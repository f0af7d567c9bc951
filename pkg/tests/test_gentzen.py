import hypothesis
import hypothesis.strategies as strat
import pytest

from qcoh.arrows import ALL, GammaAll, Id, IotaAll, QArrow, compose, typecheck
from qcoh.errors import HasCut, NotVariablePure, TargetShapeMismatch
from qcoh.generate import gen_random_arrow
from qcoh.gentzen import (
    EXIST, FREE, UNIV, Fresh, GAllL, GAllR, GCut, GId, canon_form_set, compute_clusters, denote, denote_as,
    develop, eigendiversify, eliminate_cut, eliminate_renaming, gentzenize, invert_right,
    is_cut_free, is_developed, is_eigendiversified, is_renaming_free, is_variable_pure,
    parse_gentzen, print_gentzen, purify, term_vars,
)
from qcoh.graphs import graph_eq, graph_of, identity_graph, profile_of
from qcoh.lang import parse_formula

ARITIES = {"R": 2, "P": 1, "Q": 1}
TWO_CLUSTERS = ("(exR z {R(u,z) & P(z)} (gand {R(u,y)} {P(y)} "
                "(allL x {R(u,x)} (gid {R(u,y)})) (gid {P(y)})))")
ONE_CLUSTER = ("(exR z {R(y,z) & P(z)} (gand {R(y,y)} {P(y)} "
               "(allL x {R(x,x)} (gid {R(y,y)})) (gid {P(y)})))")
COUNTEREXAMPLE = "(gren u y (allL x {all y. R(x,y)} u (allL y {R(u,y)} z (gid {R(u,z)}))))"
QUANT_CUT = ("(cut {all x. P(x)} (allR x {P(x)} u (allL x {P(x)} u (gid {P(u)}))) "
             "(allL x {P(x)} y (gid {P(y)})))")


def F(text):
    return parse_formula(text)


def G(text):
    return parse_gentzen(text, ARITIES)


def same_graph(s, t):
    return graph_eq(graph_of(denote(s)), graph_of(denote(t)))


def is_identity(f):
    return graph_eq(graph_of(f), identity_graph(profile_of(f.source)))


@pytest.mark.parametrize("a, b", [("P | Q", "Q | P"), ("(P & Q) & R", "P & (Q & R)"),
                                  ("all x. (P(x) | Q)", "all x. (Q | P(x))")])
def test_form_sets_identify_ac_variants(a, b):
    assert canon_form_set(F(a)) == canon_form_set(F(b))


def test_form_sets_keep_connectives_apart():
    assert canon_form_set(F("P | Q")) != canon_form_set(F("P & Q"))


def test_gentzen_translation_of_quantifier_primitives():
    a = F("P(x) | Q")
    assert isinstance(gentzenize(IotaAll("x", a)), GAllL)
    assert isinstance(gentzenize(GammaAll("x", F("Q"))), GAllR)
    t = gentzenize(QArrow(ALL, "x", Id(F("P(x)"))))
    assert isinstance(t, GAllR) and isinstance(t.f, GAllL)


def test_denotation_of_left_rule():
    t = G("(allL x {P(x)} y (gid {P(y)}))")
    d = denote(t)
    assert str(d.type) == "all x. P(x) |- P(y)"
    assert is_identity(d)


def test_print_parse_round_trip():
    for text in (TWO_CLUSTERS, ONE_CLUSTER, QUANT_CUT):
        t = G(text)
        assert G(print_gentzen(t)) == t


def test_purify_leaves_pure_terms_alone():
    t = G(TWO_CLUSTERS)
    assert is_variable_pure(t)
    h2, core, h1 = purify(t, Fresh(term_vars(t)))
    assert core == t
    assert is_identity(h1) and is_identity(h2)


def test_purify_counterexample():
    t = G(COUNTEREXAMPLE)
    assert not is_variable_pure(t)
    h2, core, h1 = purify(t, Fresh(term_vars(t)))
    assert is_variable_pure(core)
    whole = compose(h2, denote(core), h1)
    assert whole.type == t.sequent
    assert graph_eq(graph_of(whole), graph_of(denote(t)))


def test_renaming_elimination_needs_purity():
    with pytest.raises(NotVariablePure):
        eliminate_renaming(G(COUNTEREXAMPLE))
    with pytest.raises(NotVariablePure):
        eliminate_cut(G(COUNTEREXAMPLE))


def test_renaming_elimination_on_pure_term():
    t = G("(gren y w (gand {P(y)} {P(z)} (gid {P(y)}) (gid {P(z)})))")
    out = eliminate_renaming(t)
    assert is_renaming_free(out)
    assert out.sequent == t.sequent
    assert same_graph(out, t)


def test_atomic_cut():
    assert eliminate_cut(GCut(F("P"), GId(F("P")), GId(F("P")))) == GId(F("P"))


def test_quantifier_cut_reduces():
    t = G(QUANT_CUT)
    trace = []
    out = eliminate_cut(t, trace=trace)
    assert is_cut_free(out)
    assert out.sequent == t.sequent
    assert str(out.sequent) == "all x. P(x) |- P(y)"
    assert same_graph(out, t)
    assert trace and all(child < parent for parent, child in trace)


def test_two_clusters():
    rep = compute_clusters(G(TWO_CLUSTERS))
    assert sorted(map(sorted, rep.cluster_names())) == [["P1", "R2"], ["R1"]]


def test_one_cluster():
    rep = compute_clusters(G(ONE_CLUSTER))
    assert len(rep.clusters) == 1


def test_identity_is_a_free_singleton():
    rep = compute_clusters(GId(F("P(x)")))
    assert rep.cluster_names() == [{"P1"}]
    assert rep.couples[0].kind == (FREE, FREE)
    assert rep.gates == [[]]


def test_clusters_need_cut_free_input():
    with pytest.raises(HasCut):
        compute_clusters(G(QUANT_CUT))


def test_eigendiversify_refreshes_a_shared_eigenvariable():
    # The eigenvariable u of the right rule is also free in the other conjunct.
    t = G("(gand {all x. P(x)} {Q(u)} (allR x {P(x)} u (allL x {P(x)} u (gid {P(u)}))) (gid {Q(u)}))")
    assert not is_eigendiversified(t)
    out = eigendiversify(t)
    assert is_eigendiversified(out)
    assert out.sequent == t.sequent
    assert same_graph(out, t)
    assert eigendiversify(out) == out


def test_invert_right_on_a_right_rule():
    t = G("(allR x {P(x)} u (allL x {P(x)} u (gid {P(u)})))")
    assert invert_right(t) == t.f


def test_invert_right_on_another_shape():
    t = G("(gor {all x. P(x)} {S} (allR x {P(x)} u (allL x {P(x)} u (gid {P(u)}))) (gid {S}))")
    inv = invert_right(t)
    (v,) = inv.target.free - t.target.free
    back = GAllR("x", F("P(x)"), v, inv)
    assert back.sequent == t.sequent
    assert same_graph(back, t)


def test_invert_left_dual():
    t = G("(gand {some x. P(x)} {S} (exL x {P(x)} u (exR x {P(x)} u (gid {P(u)}))) (gid {S}))")
    inv = invert_right(t, "exL")
    from qcoh.gentzen import GExL
    (v,) = inv.source.free - t.source.free
    back = GExL("x", F("P(x)"), v, inv)
    assert back.sequent == t.sequent
    assert same_graph(back, t)
    with pytest.raises(TargetShapeMismatch):
        invert_right(GId(F("P")))


def test_develop_identity():
    assert develop(Id(F("P & Q")), "qds") == Id(F("P & Q"))


def test_develop_tensor():
    from qcoh.arrows import CHat, Tensor
    f = Tensor("&", CHat(F("P"), F("Q")), CHat(F("R"), F("S")))
    d = develop(f, "qds")
    assert is_developed(d)
    assert d.type == f.type
    assert graph_eq(graph_of(d), graph_of(f))
    assert develop(d, "qds").type == d.type


def _pipeline(f):
    gt = gentzenize(f)
    fresh = Fresh()
    h2, core, h1 = purify(gt, fresh)
    trace = []
    out = eliminate_cut(core, trace=trace, fresh=fresh)
    return gt, h2, core, h1, out, trace


@hypothesis.settings(max_examples=40)
@hypothesis.given(strat.sampled_from(["qds", "qmds"]), strat.integers(0, 10**6))
def test_pipeline_preserves_type_and_graph(system, seed):
    f = gen_random_arrow(system, 8, seed, diversified=True)
    gt, h2, core, h1, out, trace = _pipeline(f)
    assert graph_eq(graph_of(denote_as(gt, f.source, f.target)), graph_of(f))
    whole = compose(h2, denote(core), h1)
    assert whole.type == gt.sequent
    assert graph_eq(graph_of(whole), graph_of(denote(gt)))
    assert is_cut_free(out) and is_renaming_free(out) and is_variable_pure(out)
    assert out.sequent == core.sequent
    assert same_graph(out, core)
    assert all(child < parent for parent, child in trace)


@hypothesis.settings(max_examples=40)
@hypothesis.given(strat.sampled_from(["qds", "qmds"]), strat.integers(0, 10**6))
def test_cluster_invariants(system, seed):
    out = _pipeline(gen_random_arrow(system, 8, seed, diversified=True))[4]
    rep = compute_clusters(out)
    kinds = {c.kind for c in rep.couples}
    assert not kinds & {(FREE, UNIV), (EXIST, UNIV), (EXIST, FREE)}
    for k, cluster in enumerate(rep.clusters):
        ks = {rep.couples[i].kind for i in cluster}
        if ks & {(UNIV, UNIV), (EXIST, EXIST)}:
            assert rep.eigengates[k]
        if (FREE, FREE) in ks:
            assert len(cluster) == 1
        if rep.eigengates[k]:
            assert all(FREE not in rep.couples[i].kind for i in cluster)


@hypothesis.settings(max_examples=40)
@hypothesis.given(strat.sampled_from(["qds", "qmds"]), strat.integers(0, 10**6))
def test_eigendiversification(system, seed):
    out = _pipeline(gen_random_arrow(system, 8, seed, diversified=True))[4]
    ed = eigendiversify(out)
    assert is_eigendiversified(ed)
    assert ed.sequent == out.sequent
    assert same_graph(ed, out)


@hypothesis.settings(max_examples=30)
@hypothesis.given(strat.sampled_from(["qds", "qmds"]), strat.integers(0, 10**6))
def test_develop_preserves_type_and_graph(system, seed):
    f = gen_random_arrow(system, 8, seed)
    d = develop(f, system)
    assert is_developed(d)
    assert typecheck(d, system) == f.type
    assert graph_eq(graph_of(d), graph_of(f))
