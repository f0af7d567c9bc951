import json

import hypothesis
import hypothesis.strategies as strat
import pytest

from qcoh.arrows import (
    ALL, CHat, Comp, GammaAll, Id, IotaAll, QArrow, Ren, Tensor, ThetaAll, derive_theta, typecheck,
)
from qcoh.decide import (
    Verdict, and_or_violations, decide_eq, gen_random_arrow, or_and_violations, positions,
    replace_at, rewrite_chain, rewrite_once, subterm_at,
)
from qcoh.errors import NoMatch, ProvisoViolation
from qcoh.lang import Quant, parse_formula
from qcoh.schemas import schema_by_name

SYSTEMS = ["qds", "qmds", "qpn-neg", "qmpn-neg", "qpn", "qmpn"]


def F(text):
    return parse_formula(text)


def test_beta_instance_is_equal_to_identity():
    a = F("P | Q")
    lhs = Comp(IotaAll("x", a), GammaAll("x", a))
    assert decide_eq(lhs, Id(a), "qds").equal


def test_gamma_iota_is_identity():
    a = F("P")
    f = Comp(GammaAll("x", a), IotaAll("x", a))
    assert decide_eq(f, Id(Quant(ALL, "x", a)), "qds") == Verdict("equal")


def test_swap_is_not_identity():
    v = decide_eq(CHat(F("P"), F("P")), Id(F("P & P")), "qds")
    assert v.kind == "unequal"
    assert v.witness == {"kind": "link", "position": "S0", "lhs": ["S0", "T1"], "rhs": ["S0", "T0"]}
    assert json.loads(v.to_json())["verdict"] == "unequal"


def test_theta_inverse_is_identity():
    a, d = F("P(x)"), F("Q")
    f = Comp(ThetaAll("x", a, d), derive_theta("all<", "x", a, d))
    assert decide_eq(f, Id(f.source), "qds").equal


def test_type_mismatch_and_ill_typed_terms():
    v = decide_eq(Id(F("P")), Id(F("Q")), "qds")
    assert v.kind == "type-mismatch"
    assert v.to_dict() == {"verdict": "type-mismatch", "lhs_type": "P |- P", "rhs_type": "Q |- Q"}
    with pytest.raises(ProvisoViolation):
        decide_eq(GammaAll("x", F("P(x)")), Id(F("P(x)")), "qds")


def test_json_of_equal():
    assert Verdict("equal").to_json() == '{"verdict":"equal"}'


def test_budget_one_gives_identity_on_an_atom():
    f = gen_random_arrow("qds", 1, 5)
    assert isinstance(f, Id) and f.a.__class__.__name__ == "Atom"


def test_generator_is_deterministic_and_covers_delta():
    assert gen_random_arrow("qpn-neg", 10, 3) == gen_random_arrow("qpn-neg", 10, 3)
    seen = 0
    for seed in range(1000):
        f = gen_random_arrow("qpn-neg", 15, seed)
        typecheck(f, "qpn-neg")
        seen += "DeltaAll(" in repr(f)
    assert seen >= 1


def test_unit_rewrite_wraps_identity():
    f = Id(F("P & Q"))
    g = rewrite_once(f, schema_by_name("(cat 1)"), (), "rl", "qds")
    assert isinstance(g, Comp)
    assert decide_eq(f, g, "qds").equal


def test_beta_rewrite_at_root():
    a = F("P")
    lhs = Comp(IotaAll("x", a), GammaAll("x", a))
    assert rewrite_once(lhs, schema_by_name("(∀β)"), (), "lr", "qds") == Id(a)
    with pytest.raises(NoMatch):
        rewrite_once(Id(a), schema_by_name("(∀β)"), (), "lr", "qds")


def test_positions_and_replacement():
    f = Comp(Tensor("&", Id(F("P")), Id(F("Q"))), CHat(F("Q"), F("P")))
    paths = list(positions(f))
    assert paths == [(), (0,), (0, 0), (0, 1), (1,)]
    assert subterm_at(f, (0, 1)) == Id(F("Q"))
    g = replace_at(f, (1,), CHat(F("Q"), F("P")))
    assert g == f
    with pytest.raises(NoMatch):
        subterm_at(f, (1, 0))


@hypothesis.given(strat.sampled_from(SYSTEMS), strat.integers(0, 10**6))
def test_decision_is_reflexive(system, seed):
    f = gen_random_arrow(system, 10, seed)
    assert decide_eq(f, f, system).equal


@hypothesis.given(strat.sampled_from(SYSTEMS), strat.integers(0, 10**6))
def test_rewrite_chains_preserve_the_verdict(system, seed):
    f = gen_random_arrow(system, 6, seed)
    g, _ = rewrite_chain(f, 4, system, seed)
    h, _ = rewrite_chain(g, 4, system, seed + 1)
    assert decide_eq(f, g, system).equal
    assert decide_eq(g, f, system).equal
    assert decide_eq(f, h, system).equal


@hypothesis.given(strat.sampled_from(SYSTEMS), strat.integers(0, 10**6))
def test_congruence(system, seed):
    f = gen_random_arrow(system, 6, seed)
    g, _ = rewrite_chain(f, 3, system, seed)
    h = gen_random_arrow(system, 4, seed + 7)
    assert decide_eq(Tensor("|", f, h), Tensor("|", g, h), system).equal
    assert decide_eq(Comp(Id(f.target), f), Comp(Id(g.target), g), system).equal
    assert decide_eq(QArrow(ALL, "x", f), QArrow(ALL, "x", g), system).equal
    var = "w" if "w" not in repr(f) + repr(g) else "v9"
    try:
        r1, r2 = Ren("x", var, f), Ren("x", var, g)
        r1.type, r2.type
    except Exception:
        return
    assert decide_eq(r1, r2, system).equal


@hypothesis.given(strat.integers(0, 10**6))
def test_and_or_lemma_without_mix(seed):
    assert and_or_violations(gen_random_arrow("qds", 10, seed)) == []


@hypothesis.given(strat.sampled_from(["qds", "qmds"]), strat.integers(0, 10**6))
def test_or_and_lemma(system, seed):
    assert or_and_violations(gen_random_arrow(system, 10, seed)) == []


def test_mix_breaks_the_and_or_lemma():
    from qcoh.arrows import Mix
    assert and_or_violations(Mix(F("P"), F("Q"))) == [(0, 0), (1, 1)]
