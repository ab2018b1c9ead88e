"""Command-line front end, exercised in process: exit codes, JSON
reports, output files, and the seeded verification suites."""

import json

import pytest

from dercat.linalg import Field, Matrix
from dercat import diagram
from dercat import presheaf as ps
from dercat import complexes as cx
from dercat import generators as gen
from dercat import serialize as se
from dercat import cli

F2 = Field("prime", 2)
F5 = Field("prime", 5)


def simple(field, cat, at):
    dims = {x: 1 if x == at else 0 for x in cat.objects}
    action = {a: Matrix.zeros(field, dims[cat.src[a]], dims[cat.tgt[a]])
              for a in cat.nonidentity_arrows()}
    return ps.Presheaf(field, cat, dims, action)


def nonsplit_square_complex():
    d1 = diagram.delta(1)
    s0, s1 = simple(F2, d1, 0), simple(F2, d1, 1)
    p0 = ps.free_at(F2, d1, 1, 0)
    infl = ps.PresheafMap(s1, p0, {0: Matrix.zeros(F2, 1, 0),
                                   1: Matrix.identity(F2, 1)})
    defl = ps.PresheafMap(p0, s0, {0: Matrix.identity(F2, 1),
                                   1: Matrix.zeros(F2, 0, 1)})
    return gen.conflation_square(ps.Conflation(infl, defl), d1).complex


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out


def test_check_diagram(tmp_path, capsys):
    p = tmp_path / "d2.json"
    se.save(p, diagram.delta(2))
    code, out = run(capsys, "check-diagram", str(p))
    assert code == 0 and "ok" in out
    code, out = run(capsys, "--json", "check-diagram", str(p))
    rep = json.loads(out)
    assert rep["ok"] and rep["objects"] == 3


def test_missing_and_wrong_kind_files(tmp_path, capsys):
    code, _ = run(capsys, "check-diagram", str(tmp_path / "absent.json"))
    assert code == 2
    p = tmp_path / "d.json"
    se.save(p, diagram.delta(1))
    code, _ = run(capsys, "check-presheaf", str(p))
    assert code == 2


def test_field_mismatch_is_input_error(tmp_path, capsys):
    p = tmp_path / "x5.json"
    se.save(p, cx.stalk(ps.free_at(F5, diagram.delta(1), 1, 0)))
    code, _ = run(capsys, "resolve", str(p))
    assert code == 2
    code, _ = run(capsys, "--field", "fp:5", "resolve", str(p))
    assert code == 0


def test_resolve_writes_reloadable_output(tmp_path, capsys):
    p = tmp_path / "s0.json"
    out = tmp_path / "res.json"
    se.save(p, cx.stalk(simple(F2, diagram.delta(1), 0)))
    code, _ = run(capsys, "resolve", str(p), "--out", str(out))
    assert code == 0
    res = se.load(out, field=F2)
    for n in res.degrees():
        assert res.term(n).free_parts is not None


def test_ext_of_simples(tmp_path, capsys):
    d1 = diagram.delta(1)
    a, b = tmp_path / "s0.json", tmp_path / "s1.json"
    se.save(a, cx.stalk(simple(F2, d1, 0)))
    se.save(b, cx.stalk(simple(F2, d1, 1)))
    code, out = run(capsys, "--json", "ext", "--source", str(a),
                    "--target", str(b), "--n", "1")
    assert code == 0 and json.loads(out)["dim"] == 1
    code, out = run(capsys, "--json", "ext", "--source", str(b),
                    "--target", str(a), "--n", "1")
    assert code == 0 and json.loads(out)["dim"] == 0


def test_kan_and_hocolim(tmp_path, capsys):
    r = gen.rng_for(1)
    d1 = diagram.delta(1)
    x = gen.rand_complex(r, F2, d1, lo=0, hi=1, max_parts=1)
    u = diagram.functor_by_objects(d1, diagram.delta(2), {0: 0, 1: 2})
    xp, up = tmp_path / "x.json", tmp_path / "u.json"
    se.save(xp, x)
    se.save(up, u)
    code, _ = run(capsys, "kan", str(xp), "--dir", "left",
                  "--functor", str(up), "--out", str(tmp_path / "l.json"))
    assert code == 0
    assert isinstance(se.load(tmp_path / "l.json", field=F2), cx.Complex)
    code, _ = run(capsys, "hocolim", str(xp))
    assert code == 0


def test_square_check_and_triangle(tmp_path, capsys):
    p = tmp_path / "sq.json"
    se.save(p, nonsplit_square_complex())
    code, out = run(capsys, "--json", "square-check", str(p))
    rep = json.loads(out)
    assert code == 0 and rep["cocartesian"] and rep["cartesian"]
    code, out = run(capsys, "--json", "triangle", str(p))
    rep = json.loads(out)
    assert code == 0 and rep["matches"]
    assert rep["delta_class"] == ["1"]


def test_suspend_and_recollement(tmp_path, capsys):
    r = gen.rng_for(2)
    d1 = diagram.delta(1)
    xp = tmp_path / "x.json"
    se.save(xp, gen.rand_complex(r, F2, d1, max_parts=1))
    code, _ = run(capsys, "suspend", str(xp))
    assert code == 0
    prod = diagram.product(d1, diagram.delta(1))
    yp = tmp_path / "y.json"
    se.save(yp, gen.rand_stalkish_complex(r, F2, prod, max_parts=1))
    code, _ = run(capsys, "recollement", str(yp))
    assert code == 0


def test_dia_then_lift_roundtrip(tmp_path, capsys):
    r = gen.rng_for(3)
    x = gen.rand_honest(r, F2, diagram.delta(1), diagram.delta(1),
                        max_parts=1)
    xp, dp = tmp_path / "x.json", tmp_path / "d.json"
    se.save(xp, x)
    code, _ = run(capsys, "dia", str(xp), "--out", str(dp))
    assert code == 0
    code, out = run(capsys, "--json", "lift", str(dp),
                    "--out", str(tmp_path / "lift.json"))
    assert code == 0
    assert isinstance(se.load(tmp_path / "lift.json", field=F2), cx.Complex)


def test_hom_compare_command(tmp_path, capsys):
    r = gen.rng_for(4)
    prod = diagram.product(diagram.delta(1), diagram.delta(1))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    se.save(a, gen.rand_stalkish_complex(r, F2, prod, max_parts=1))
    se.save(b, gen.rand_stalkish_complex(r, F2, prod, max_parts=1))
    code, out = run(capsys, "--json", "hom-compare", "--source", str(a),
                    "--target", str(b))
    assert code == 0
    rep = json.loads(out)
    assert rep["coherent_dim"] == rep["incoherent_dim"]


def test_verify_vacuous_and_small(capsys):
    code, out = run(capsys, "verify", "--suite", "der7", "--cases", "0")
    assert code == 0 and "0/0" in out
    code, out = run(capsys, "--json", "verify", "--suite", "adjunction",
                    "--seed", "5", "--cases", "3")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] == 3 and not rep["failures"]


def test_verify_failure_writes_counterexample(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    witness = cx.stalk(simple(F2, diagram.delta(1), 0))

    def bad_suite(r, field):
        return False, "synthetic failure", witness

    monkeypatch.setitem(cli.SUITES, "der7", bad_suite)
    code, out = run(capsys, "verify", "--suite", "der7", "--cases", "2")
    assert code == 1
    path = tmp_path / "counterexample-der7-0.json"
    assert path.exists()
    assert se.load(path, field=F2) == witness


def test_bad_arguments_exit_2(capsys):
    assert cli.main(["no-such-command"]) == 2
    assert cli.main(["--field", "fp:9", "verify", "--suite", "der7",
                     "--cases", "0"]) == 2
