import hypothesis
import hypothesis.strategies as strat
import pytest

from qcoh.arrows import ALL, SOME, Comp, DeltaAll, Id, QArrow, Ren, SigmaEx, ThetaAll, ThetaEx, typecheck
from qcoh.generate import Gen, gen_random_arrow
from qcoh.graphs import graph_eq, graph_of, identity_graph, profile_of
from qcoh.lang import Neg, System, check_system, parse_formula, subst
from qcoh.translate import (
    FROM, TO, build_double_neg, build_double_neg_inv, build_iso, build_q, negate_arrow, nnf,
    nnf_arrow, nnf_delta, nnf_formula, nnf_sigma, theta_all_via_delta, theta_ex_via_delta,
)


def F(text):
    return parse_formula(text)


def is_identity(f):
    return graph_eq(graph_of(f), identity_graph(profile_of(f.source)))


def same_graph(f, g):
    return f.type == g.type and graph_eq(graph_of(f), graph_of(g))


def test_nnf_pushes_negation_through_quantifiers():
    assert nnf_formula(F("~all x. P(x)")) == F("some x. ~P(x)")
    assert nnf_formula(F("~some x. (P(x) & ~Q)")) == F("all x. (~P(x) | Q)")
    assert nnf_formula(F("~~P")) == F("P")


@pytest.mark.parametrize("text", ["P(x,y)", "~P(x,y)", "P"])
def test_nnf_fixes_literals(text):
    assert nnf_formula(F(text)) == F(text)


def test_nnf_of_atomic_delta_keeps_the_crown():
    f = DeltaAll(F("P(x)"), F("~(Q & R)"))
    assert nnf_arrow(f) == DeltaAll(F("P(x)"), F("~Q | ~R"))


def test_nnf_commutes_with_renaming():
    f = Id(F("~all y. R(x,y)"))
    assert nnf_arrow(Ren("x", "z", f)) == Ren("x", "z", nnf_arrow(f))


def test_nnf_result():
    f = Id(F("~(P & Q)"))
    res = nnf(f)
    assert res.formula == nnf_formula(f.source)
    assert res.arrow == nnf_arrow(f)


@pytest.mark.parametrize("crown", ["all x. R(x,y)", "some y. (P(y) & ~Q)", "~all x. P(x)",
                                   "all x. some y. R(x,y)", "P & ~Q"])
def test_nnf_of_compound_crowns(crown):
    b, a = F(crown), F("S")
    d = nnf_delta(b, a)
    typecheck(d, "qpn")
    assert graph_eq(graph_of(d), graph_of(DeltaAll(b, a)))
    s = nnf_sigma(b, a)
    typecheck(s, "qpn")
    assert graph_eq(graph_of(s), graph_of(SigmaEx(b, a)))


def test_q_arrows():
    a = F("P(x) & Q")
    fwd, back = build_q("x", a, ALL, TO), build_q("x", a, ALL, FROM)
    assert str(typecheck(fwd, "qpn-neg")) == "~all x. (P(x) & Q) |- some x. ~(P(x) & Q)"
    assert is_identity(Comp(back, fwd)) and is_identity(Comp(fwd, back))
    efwd, eback = build_q("x", a, SOME, TO), build_q("x", a, SOME, FROM)
    assert str(typecheck(efwd, "qpn-neg")) == "~some x. (P(x) & Q) |- all x. ~(P(x) & Q)"
    assert is_identity(Comp(eback, efwd)) and is_identity(Comp(efwd, eback))


def test_isos_on_literals_and_quantifiers():
    assert build_iso(F("P(x)")) == (Id(F("P(x)")), Id(F("P(x)")))
    assert build_iso(F("~P(x)")) == (Id(F("~P(x)")), Id(F("~P(x)")))
    i, i_inv = build_iso(F("all x. ~~P(x)"))
    j, j_inv = build_iso(F("~~P(x)"))
    assert i == QArrow(ALL, "x", j)
    assert i_inv == QArrow(ALL, "x", j_inv)


def test_double_negation():
    b = F("all x. P(x)")
    n, n_inv = build_double_neg(b), build_double_neg_inv(b)
    assert str(typecheck(n, "qpn-neg")) == "all x. P(x) |- ~~all x. P(x)"
    assert is_identity(n) and is_identity(n_inv)
    assert is_identity(Comp(n_inv, n))


def test_negation_of_an_identity():
    g = negate_arrow(Id(F("P")))
    assert str(typecheck(g, "qpn-neg")) == "~P |- ~P"
    assert is_identity(g)


@pytest.mark.parametrize("a, d", [("P(x)", "Q"), ("R(x,y) | ~P(x)", "S(y)")])
def test_theta_is_definable(a, d):
    x = "x"
    assert same_graph(theta_all_via_delta(x, F(a), F(d)), ThetaAll(x, F(a), F(d)))
    assert same_graph(theta_ex_via_delta(x, F(a), F(d)), ThetaEx(x, F(a), F(d)))


formulas = strat.builds(lambda seed, size: Gen(seed, "qpn-neg").formula(size),
                        strat.integers(0, 10**6), strat.integers(0, 7))


@hypothesis.given(formulas)
def test_nnf_is_idempotent_and_in_the_positive_grammar(a):
    b = nnf_formula(a)
    assert nnf_formula(b) == b
    check_system(b, System.QPN)


@hypothesis.given(formulas)
def test_isos_are_inverse(a):
    i, i_inv = build_iso(a)
    assert typecheck(i, "qpn-neg").source == a
    assert i.target == nnf_formula(a)
    assert is_identity(Comp(i_inv, i)) and is_identity(Comp(i, i_inv))


@hypothesis.given(formulas, strat.sampled_from(["x", "y"]), strat.sampled_from(["y", "z", "w"]))
def test_iso_commutes_with_renaming(a, x, y):
    hypothesis.assume(x != y)
    b = subst(a, x, y)
    hypothesis.assume(b is not None)
    i, _ = build_iso(a)
    j, _ = build_iso(b)
    assert same_graph(Ren(x, y, i), j)


@hypothesis.given(strat.sampled_from(["qpn-neg", "qmpn-neg"]), strat.integers(0, 10**6))
def test_translation_keeps_graphs(system, seed):
    f = gen_random_arrow(system, 10, seed)
    g = nnf_arrow(f)
    typecheck(g, "qmpn" if system == "qmpn-neg" else "qpn")
    assert graph_eq(graph_of(g), graph_of(f))
    i, _ = build_iso(f.source)
    _, j_inv = build_iso(f.target)
    assert same_graph(Comp(j_inv, Comp(g, i)), f)


@hypothesis.given(strat.sampled_from(["qpn", "qmpn"]), strat.integers(0, 10**6))
def test_translation_fixes_positive_terms_on_graphs(system, seed):
    f = gen_random_arrow(system, 10, seed)
    assert same_graph(nnf_arrow(f), f)


@hypothesis.given(strat.integers(0, 10**6))
def test_negation_is_contravariant(seed):
    gen = Gen(seed, "qpn-neg")
    f = gen.arrow(6)
    g = gen.arrow_from(f.target, 6)
    nf, ng = negate_arrow(f), negate_arrow(g)
    t = typecheck(nf, "qpn-neg")
    assert (t.source, t.target) == (Neg(f.target), Neg(f.source))
    lhs = negate_arrow(Comp(g, f))
    assert same_graph(lhs, Comp(nf, ng))
