import io

import pytest
from conftest import QQ

from treematroid.cli import CAP, FAIL, OK, USAGE, run_command
from treematroid.fixtures import fixture_path, path3, tri, twosum
from treematroid.formats import dump, load
from treematroid.o2 import O2Instance


def run(*argv):
    out = io.StringIO()
    code = run_command([str(a) for a in argv], out)
    return code, out.getvalue()


def lines(text):
    return text.splitlines()


@pytest.fixture
def sarah_instance(tmp_path):
    path = tmp_path / "sarah.json"
    dump(O2Instance(twosum(), "a", {"b", "c", "d"}, set()), path)
    return path


@pytest.fixture
def colin_instance(tmp_path):
    path = tmp_path / "colin.json"
    dump(O2Instance(twosum(), "a", {"b"}, {"c", "d"}), path)
    return path


def test_circuits_of_tri():
    code, out = run("circuits", fixture_path("TRI"))
    assert code == OK
    assert "count: 1" in lines(out) and "  {a,b,c}" in lines(out)


def test_cocircuits_of_tri():
    code, out = run("circuits", fixture_path("TRI"), "--cocircuits")
    assert code == OK and "count: 3" in lines(out)


def test_build_base_on_twosum():
    code, out = run("build-base", fixture_path("TWOSUM"), "--root", "1")
    assert code == OK
    assert {"size: 3", "cert: OK", "base: {a,b,c}"} <= set(lines(out))


def test_gen_cex_reports_intersection_six(tmp_path):
    code, out = run("gen-cex", "--n", 3)
    assert code == OK and "intersection: 6" in lines(out)
    target = tmp_path / "cex.json"
    code, out = run("gen-cex", "--n", 3, "-o", target)
    assert code == OK and load(target).kind == "tree"


def test_report_ends_with_verdict_then_witness():
    _, out = run("circuits", fixture_path("TRI"))
    ls = lines(out)
    assert ls.index("verdict: OK") + 1 == ls.index("WITNESS")


@pytest.mark.parametrize("name", ["TRI", "TWOSUM", "PATH3", "TRISTAR", "CEX3"])
def test_verify_and_axioms_pass_on_fixtures(name):
    assert run("verify-presentation", fixture_path(name))[0] == OK
    assert run("check-axioms", fixture_path(name))[0] == OK


def test_minor_and_glue_write_instances(tmp_path):
    code, out = run("minor", fixture_path("TRI"), "--contract", "a")
    assert code == OK and '"ground": ["b", "c"]' in out
    code, out = run("glue", fixture_path("TWOSUM"))
    assert code == OK and '"ground": ["a", "b", "c", "d"]' in out


def test_adjoin_with_rational_entries(tmp_path):
    src = tmp_path / "q.json"
    dump(tri(QQ), src)
    code, out = run("adjoin", src, "--x", "a:1,b:-1/2")
    assert code == OK and '"*"' in out


def test_prevectors_of_twosum():
    code, out = run("enumerate-prevectors", fixture_path("TWOSUM"))
    assert code == OK and "count:" in out


def test_o2_witness_and_games(sarah_instance, colin_instance):
    code, out = run("o2-witness", sarah_instance)
    assert code == OK and "side: vector" in lines(out)
    code, out = run("o2-witness", colin_instance)
    assert code == OK and "side: covector" in lines(out)
    code, out = run("solve-game", sarah_instance)
    assert code == OK and "winner-name: Sarah" in lines(out)
    code, out = run("reduce-strategy", sarah_instance)
    assert code == OK and "reduced: yes" in lines(out)
    code, out = run("sigma-analysis", sarah_instance)
    assert code == OK and "within-bound: yes" in lines(out)
    code, out = run("sigma-analysis", colin_instance)
    assert code == FAIL


def test_toy_game_reduction():
    code, out = run("reduce-strategy", fixture_path("TOYGAME"))
    assert code == OK and "splice-closed: yes" in lines(out)


def test_im_star_and_dependent_input():
    assert run("im-star", fixture_path("TRISTAR"), "--X", "a")[0] == OK
    assert run("im-star", fixture_path("TRISTAR"), "--X", "a,b,x")[0] == FAIL


def test_graph_verify_on_both_graph_fixtures():
    for name in ("K4", "TRIPATH"):
        code, out = run("graph-verify", fixture_path(name), "--seed", 2)
        assert code == OK and "circuits-match: yes" in lines(out)


def test_same_seed_same_bytes():
    a = run("graph-verify", fixture_path("TRIPATH"), "--seed", 5, "--partitions", 10)
    b = run("graph-verify", fixture_path("TRIPATH"), "--seed", 5, "--partitions", 10)
    assert a == b


def test_exit_codes(tmp_path):
    assert run("no-such-command")[0] == USAGE
    assert run("circuits", tmp_path / "missing.json")[0] == USAGE
    assert run("check-axioms", fixture_path("PATH3"), "--o2-cap", 10)[0] == CAP
    bad = tmp_path / "gf4.json"
    bad.write_text(fixture_path("TRI").read_text().replace("GF(2)", "GF(4)"))
    assert run("circuits", bad)[0] == USAGE
    assert run("o2-witness", fixture_path("TWOSUM"))[0] == USAGE


def test_path3_round_trip_through_the_cli(tmp_path):
    dump(path3(), tmp_path / "p.json")
    code, out = run("glue", tmp_path / "p.json")
    assert code == OK and '"a": 1, "b": 1, "c": 1, "d": 1, "e": 1, "f": 1' in out
