import json

import pytest

from sullivan.cli import main, parse_arguments


@pytest.fixture
def run(tmp_path, capsys, monkeypatch):
    """Run the CLI against an isolated cache and return (exit code, stdout)."""
    monkeypatch.setenv("SULLIVAN_MAX_COMPLEXITY", "6")
    cache_dir = str(tmp_path / "cache")

    def _run(*argv):
        code = main([*argv, "--cache-dir", cache_dir, "--threads", "1"])
        return code, capsys.readouterr().out

    return _run


def test_parse_arguments_defaults():
    args = parse_arguments(["homology"])
    assert (args.flavor, args.g, args.m, args.format) == ("unpar-unen", 0, 1, "csv")
    assert not args.use_morse


def test_homology_csv(run):
    code, out = run("homology", "-g", "0", "-m", "2")
    assert code == 0
    assert out == "degree,betti,torsion\n0,1,\n1,1,\n2,0,\n"


def test_homology_json(run):
    code, out = run("homology", "--flavor", "par-unen", "-m", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert [row["betti"] for row in payload["rows"]] == [1, 1]


def test_homology_with_morse_reduction(run):
    code, out = run("homology", "-m", "3", "--use-morse", "--max-degree", "1")
    assert code == 0
    assert out == "degree,betti,torsion\n0,1,\n1,0,\n"


def test_budget_exit_code(run):
    code, _ = run("homology", "-g", "3", "-m", "1")
    assert code == 3


def test_invalid_component_exit_code(run):
    code, _ = run("homology", "-g", "-1", "-m", "2")
    assert code == 2


def test_unknown_flavor_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        parse_arguments(["homology", "--flavor", "cyclic"])
    assert excinfo.value.code == 2


def test_verify(run):
    code, out = run("verify", "-m", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "check,status"
    assert "d_squared,pass" in lines
    assert "transfer,pass" in lines


def test_verify_json(run):
    code, out = run("verify", "-m", "1", "--check", "euler,d_squared", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert [c["check"] for c in payload["checks"]] == ["euler", "d_squared"]


def test_verify_unknown_check(run):
    code, _ = run("verify", "-m", "2", "--check", "bogus")
    assert code == 2


def test_classes(run):
    code, out = run("classes", "--check", "omega", "2")
    assert code == 0
    assert "passed,True" in out.splitlines()


def test_failed_class_check_exit_code(run):
    code, out = run("classes", "--check", "zeta", "3", "--format", "json")
    assert code == 5
    assert json.loads(out)["passed"] is False


def test_cache_info_and_clear(run):
    run("homology", "-m", "2")
    code, out = run("cache", "info")
    assert code == 0
    assert out.splitlines()[1].startswith("unpar-unen,0,2,2,1;2;1,")

    code, out = run("cache", "clear")
    assert code == 0
    assert out.strip().endswith("unpar-unen_g0_m2.sqlite")
    _, out = run("cache", "info")
    assert out == "flavor,g,m,top_degree,counts,created_at\n"
