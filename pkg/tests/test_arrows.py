import hypothesis
import hypothesis.strategies as strat
import pytest

from qcoh.arrows import (
    ALL, SOME, DeltaAll, GammaAll, Id, IotaAll, IotaEx, Ren, SigmaEx, ThetaAll, XiIndex,
    XI_NAMES, compose, derive_closure, derive_tau, derive_theta, mk_rename, typecheck,
    xi_family, xi_index,
)
from qcoh.errors import ProvisoViolation, SystemViolation, UndefinedSubstitution
from qcoh.generate import gen_random_arrow
from qcoh.graphs import graph_eq, graph_of, identity_graph, profile_of
from qcoh.lang import free_var_sequence, parse_formula
from qcoh.schemas import all_schemas, axiom_schemas

SYSTEMS = ["qds", "qmds", "qpn-neg", "qmpn-neg", "qpn", "qmpn"]


def F(text):
    return parse_formula(text)


def is_identity_graph(f):
    return graph_eq(graph_of(f), identity_graph(profile_of(f.source)))


def test_iota_typing():
    assert str(typecheck(IotaAll("x", F("P(x)")), "qds")) == "all x. P(x) |- P(x)"


def test_gamma_proviso():
    with pytest.raises(ProvisoViolation):
        typecheck(GammaAll("x", F("P(x)")), "qds")


def test_renaming_with_capture_is_undefined():
    with pytest.raises(UndefinedSubstitution):
        typecheck(Ren("x", "y", IotaEx("y", F("R(x,y)"))), "qds")


def test_delta_typing():
    t = typecheck(DeltaAll(F("P(x)"), F("Q")), "qpn-neg")
    assert t.target == F("Q & all x. (~P(x) | P(x))")


def test_non_atomic_crown_rejected_in_qpn():
    with pytest.raises(SystemViolation):
        typecheck(DeltaAll(F("P & Q"), F("Q")), "qpn")
    typecheck(DeltaAll(F("P & Q"), F("Q")), "qpn-neg")


def test_mix_needs_a_mix_system():
    from qcoh.arrows import Mix
    with pytest.raises(SystemViolation):
        typecheck(Mix(F("P"), F("Q")), "qds")
    assert str(typecheck(Mix(F("P"), F("Q")), "qmds")) == "P & Q |- P | Q"


def test_rename_identity_and_not_substitution():
    f = Id(F("P(x)"))
    assert typecheck(mk_rename("x", "x", f)) == f.type
    r = mk_rename("x", "y", f)
    assert str(r.type) == "P(y) |- P(y)"
    assert r != Id(F("P(y)"))


def test_rename_checks_endpoints_only():
    # Inner factors fail to rename (y would be captured), endpoints do not.
    a = F("all y. R(x,y)")
    inner = compose(IotaEx("y", F("all y. R(x,y)")), Id(a))
    g = compose(Ren("x", "x", Id(F("some y. all y. R(x,y)"))), inner)
    t = Ren("x", "z", g)
    assert str(t.type) == "all y. R(z,y) |- some y. all y. R(z,y)"
    bad = Ren("x", "y", IotaAll("y", F("R(x,y)")))
    with pytest.raises(UndefinedSubstitution):
        bad.type


def test_tau_typing_and_reflexivity():
    t = derive_tau(F("P(x)"), "x", "u", "v", ALL)
    assert str(t.type) == "all u. P(u) |- all v. P(v)"
    assert is_identity_graph(derive_tau(F("P(x) | Q(x)"), "x", "u", "u", SOME))
    with pytest.raises(ProvisoViolation):
        derive_tau(F("R(u,x)"), "x", "u", "v", ALL)


@pytest.mark.parametrize("q", [ALL, SOME])
def test_tau_symmetry_on_graphs(q):
    a = F("R(x,z) & P(x)")
    there, back = derive_tau(a, "x", "u", "v", q), derive_tau(a, "x", "v", "u", q)
    assert is_identity_graph(compose(back, there))


def test_tau_placeholder_is_irrelevant():
    assert derive_tau(F("P(x)"), "x", "u", "v") == derive_tau(F("P(w)"), "w", "u", "v")


def test_theta_derived_arrows():
    a, d = F("P(x)"), F("Q")
    t = derive_theta("all<", "x", a, d)
    assert str(t.type) == "all x. P(x) | Q |- all x. (P(x) | Q)"
    assert is_identity_graph(compose(ThetaAll("x", a, d), t))
    assert is_identity_graph(compose(t, ThetaAll("x", a, d)))
    assert str(derive_theta("all&<", "x", a, d).type) == "all x. P(x) & Q |- all x. (P(x) & Q)"


def test_closures():
    b = F("R(x,y)")
    assert derive_closure("iota", ALL, [], b) == Id(b)
    assert str(derive_closure("iota", ALL, ["x", "y"], b).type) == "all y. all x. R(x,y) |- R(x,y)"
    f = Id(F("P(x)"))
    assert derive_closure("ren", ALL, ["x"], f=f, ys=["y"]) == mk_rename("x", "y", f)


def test_xi_family_types():
    a = F("Q")
    assert typecheck(xi_family("Delta_check", F("P(x)"), a)).target == F("Q & (~P(x) | P(x))")
    assert typecheck(xi_family("Sigma_hat", F("P"), a)).source == F("(P & ~P) | Q")


@pytest.mark.parametrize("which", XI_NAMES)
def test_every_xi_abbreviation_typechecks(which):
    typecheck(xi_family(which, F("R(x,y)"), F("Q(z)")), "qpn")


@pytest.mark.parametrize("atom", ["R(x,y)", "P", "R(y,y)"])
def test_xi_index_with_empty_prefixes_is_delta(atom):
    p, a = F(atom), F("Q")
    ix = XiIndex(p, a, tuple(free_var_sequence(p)))
    for which, prim in (("Delta_all", DeltaAll(p, a)), ("Sigma_ex", SigmaEx(p, a))):
        t = xi_index(which, ix)
        assert typecheck(t, "qpn") == prim.type
        assert graph_eq(graph_of(t), graph_of(prim))


def test_xi_index_with_prefixes_typechecks():
    ix = XiIndex(F("R(x,y)"), F("Q"), ("z",), (("all", "u"),), (("some", "w"),))
    t = xi_index("Delta_all", ix)
    assert str(typecheck(t, "qpn")) == "Q |- Q & all z. (some w. ~R(x,y) | all u. R(x,y))"


def test_schema_table_shape():
    names = {s.name for s in axiom_schemas("qds")}
    assert "(d∧)" in names
    mix_only = {s.name for s in axiom_schemas("qmds")} - names
    assert mix_only == {"(m nat)", "(b̂ m)", "(b̌ m)", "(c m)"}
    assert any(s.derived for s in all_schemas())


@hypothesis.given(strat.sampled_from(SYSTEMS), strat.integers(0, 10**6))
def test_typecheck_is_idempotent(system, seed):
    f = gen_random_arrow(system, 8, seed)
    assert typecheck(f, system) == typecheck(f, system) == f.type


@hypothesis.given(strat.integers(0, 10**6))
def test_generator_respects_delta_grammar(seed):
    f = gen_random_arrow("qpn", 8, seed)
    typecheck(f, "qpn")
