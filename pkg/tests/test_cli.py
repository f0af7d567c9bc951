import json

import pytest

from qcoh.cli import main, run_selftest

GAMMA_IOTA = "(comp (gamma-all x {P}) (iota-all x {P}))"
ID_ALL = "(id {all x. P})"
COUNTEREXAMPLE = "(gren u y (allL x {all y. R(x,y)} u (allL y {R(u,y)} z (gid {R(u,z)}))))"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_check(capsys):
    assert run(capsys, "check", "--system", "qds", "(iota-all x {P(x)})") == (0, "all x. P(x) |- P(x)", "")


def test_eq_equal_from_files(tmp_path, capsys):
    lhs, rhs = tmp_path / "lhs.trm", tmp_path / "rhs.trm"
    lhs.write_text(GAMMA_IOTA, encoding="utf-8")
    rhs.write_text(ID_ALL, encoding="utf-8")
    code, out, _ = run(capsys, "eq", "--system", "qds", str(lhs), str(rhs))
    assert code == 0
    assert out == '{"verdict":"equal"}'


def test_eq_unequal(capsys):
    code, out, _ = run(capsys, "eq", "--system", "qds", "(chat {P} {P})", "(id {P & P})")
    assert code == 1
    verdict = json.loads(out)
    assert verdict["verdict"] == "unequal"
    assert verdict["witness"]["position"] == "S0"


def test_eq_type_mismatch(capsys):
    code, out, _ = run(capsys, "eq", "--system", "qds", "(id {P})", "(id {Q})")
    assert code == 2
    assert json.loads(out)["verdict"] == "type-mismatch"


def test_parse_error(capsys):
    code, _, err = run(capsys, "check", "--system", "qds", "(iota-all x")
    assert code == 3
    assert err.startswith("ParseError")


def test_missing_file_is_a_parse_error(tmp_path, capsys):
    assert run(capsys, "check", "--system", "qds", str(tmp_path / "absent.trm"))[0] == 3


def test_proviso_error(capsys):
    code, _, err = run(capsys, "check", "--system", "qds", "(gamma-all x {P(x)})")
    assert code == 2
    assert "ProvisoViolation" in err


def test_system_restrictions(capsys):
    assert run(capsys, "check", "--system", "qds", "(id {~P})")[0] == 2
    assert run(capsys, "check", "--system", "qds", "(mix {P} {Q})")[0] == 2
    assert run(capsys, "check", "--system", "qmds", "(mix {P} {Q})")[0] == 0


def test_cutelim_on_impure_term(capsys):
    code, _, err = run(capsys, "cutelim", "--system", "qds", COUNTEREXAMPLE)
    assert code == 4
    assert "NotVariablePure" in err


def test_cutelim_and_purify(capsys):
    term = "(cut {all x. P(x)} (allR x {P(x)} u (allL x {P(x)} u (gid {P(u)}))) (allL x {P(x)} y (gid {P(y)})))"
    code, out, _ = run(capsys, "cutelim", "--system", "qds", term)
    assert code == 0
    assert "cut" not in out
    code, out, _ = run(capsys, "purify", "--system", "qds", COUNTEREXAMPLE)
    assert code == 0
    assert out == "(gren u y (allL v$1 {all v$2. R(v$1,v$2)} (allL v$2 {R(u,v$2)} (gid {R(u,z)}))))"


def test_graph_and_dot(capsys, tmp_path):
    assert run(capsys, "graph", "--system", "qds", "(chat {P} {Q})") == (0, "2 2 | S0-T1 S1-T0", "")
    assert run(capsys, "graph", "--system", "qds", "--loops", "(id {P})")[1] == "1 1 | S0-T0 loops=0"
    target = tmp_path / "g.dot"
    assert run(capsys, "dot", "--system", "qds", "--out", str(target), "(id {P})") == (0, "", "")
    assert target.read_text(encoding="utf-8").startswith("digraph G {")


def test_develop_nnf_negate(capsys):
    assert run(capsys, "develop", "--system", "qds", "(id {P & Q})") == (0, "(id {P & Q})", "")
    code, out, _ = run(capsys, "nnf", "--system", "qpn-neg", "(id {~(P & Q)})")
    assert (code, out) == (0, "(id {~P | ~Q})")
    code, out, _ = run(capsys, "negate", "--system", "qpn-neg", "(id {P})")
    assert code == 0
    assert out.startswith("(")
    assert run(capsys, "check", "--system", "qpn-neg", out)[1] == "~P |- ~P"


def test_selftest_table(capsys):
    code, out, _ = run(capsys, "selftest", "--system", "qds", "--count", "3", "--seed", "7")
    assert code == 0
    assert out.splitlines()[-1].endswith("schemas pass")
    assert out.splitlines()[-1].split("/")[0] == out.splitlines()[-1].split("/")[1].split()[0]


def test_selftest_is_deterministic():
    first = [(r.schema, r.passed, r.total) for r in run_selftest("qmds", 3, 11)]
    second = [(r.schema, r.passed, r.total) for r in run_selftest("qmds", 3, 11)]
    assert first == second


def test_system_flag_is_required():
    with pytest.raises(SystemExit):
        main(["check", "(id {P})"])
