import hypothesis
import hypothesis.strategies as strat
import pytest

from qcoh.errors import ParseError, SystemViolation
from qcoh.generate import Gen
from qcoh.lang import (
    ALL, AND, OR, SOME, Atom, Bin, Neg, Quant, System, atom_profile, free_var_sequence,
    is_bound_in, is_diversified, is_free_in, parse_formula, print_formula, subst,
)

P, Q = Atom("P", ("x",)), Atom("Q")


def F(text):
    return parse_formula(text)


def formulas(system="qpn-neg", size=6):
    return strat.integers(0, 10**6).map(lambda s: Gen(s, system).formula(size))


def test_parse_quantifier_over_disjunction():
    assert F("all x. (P(x) | Q)") == Quant(ALL, "x", Bin(OR, P, Q))


def test_parse_existential_binary_atom():
    assert F("some y. R(x,y)") == Quant(SOME, "y", Atom("R", ("x", "y")))


def test_negation_is_rejected_in_qds():
    with pytest.raises(SystemViolation):
        parse_formula("~ all x. P(x)", system="qds")


def test_compound_negation_is_rejected_in_qpn():
    with pytest.raises(SystemViolation):
        parse_formula("~(P & Q)", system="qpn")
    parse_formula("~P & Q", system="qpn")


def test_mixed_connectives_need_parentheses():
    with pytest.raises(ParseError):
        F("P & Q | P")


def test_arity_clash_is_a_parse_error():
    with pytest.raises(ParseError):
        F("P(x) & P(x,y)")


def test_substitution_blocked_by_capture():
    assert subst(F("some y. R(x,y)"), "x", "y") is None


def test_identity_substitution():
    assert subst(F("P(x)"), "x", "x") == F("P(x)")


def test_substitution_without_free_occurrence():
    assert subst(F("all x. P(x)"), "x", "y") == F("all x. P(x)")


def test_vacuous_binder_still_binds():
    a = F("all x. P(y)")
    assert is_bound_in("x", a)
    assert not is_free_in("x", F("all x. P(x)"))
    assert F("R(x,y) & P(x)").free == {"x", "y"}


def test_free_variable_sequence_by_first_occurrence():
    assert free_var_sequence(F("all y. (P(y,x) & some x. R(z,x,z))")) == ["x", "z"]
    assert free_var_sequence(F("P(x)")) == ["x"]
    assert free_var_sequence(F("all x. P(x)")) == []


def test_atom_profile_polarities():
    assert [(o.position, o.letter, o.polarity) for o in atom_profile(F("~P(x) | P(x)"))] == [
        (0, "P", -1), (1, "P", 1)]
    assert [o.polarity for o in atom_profile(F("~~P"))] == [1]
    assert [o.polarity for o in atom_profile(F("all x. P(x)"))] == [1]


def test_diversified():
    assert is_diversified(F("P(x) & Q(y)"))
    assert not is_diversified(F("P(x) | P(y)"))
    assert is_diversified(F("all x. (P(x) | R(x,x))"))


@hypothesis.given(formulas())
def test_print_parse_round_trip(a):
    assert parse_formula(print_formula(a)) == a


@hypothesis.given(formulas("qds"), strat.sampled_from("xyzw"), strat.sampled_from("xyzw"))
def test_substitution_removes_free_occurrences(a, x, y):
    b = subst(a, x, y)
    if b is not None and x != y:
        assert x not in b.free
        assert b.free <= (a.free - {x}) | {y}


@hypothesis.given(formulas("qds"), strat.sampled_from("xyzw"), strat.data())
def test_substitution_back_and_forth(a, x, data):
    # With y not free in a, renaming x to y and back is the identity.
    y = data.draw(strat.sampled_from([v for v in "xyzwuv" if v != x and v not in a.free]))
    b = subst(a, x, y)
    if b is not None:
        assert subst(b, y, x) == a


@hypothesis.given(formulas("qmpn-neg"))
def test_generated_formulas_obey_their_grammar(a):
    from qcoh.lang import check_system
    check_system(a, System.QMPN_NEG)


def test_operator_sugar():
    assert (P & Q) == Bin(AND, P, Q)
    assert ~P == Neg(P)
