import pytest

from pointinterval.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_relations_list(capsys):
    code, out = run(capsys, "relations", "list")
    assert code == 0 and "ii34" in out and "eqi" in out


def test_relations_inverse_and_dual(capsys):
    assert run(capsys, "relations", "dual", "ip0")[1].strip().endswith("ip4")


def test_parse_prints_canonical_text(capsys):
    code, out = run(capsys, "parse", "meets(x,y)", "--free", "x:i", "--free", "y:i")
    assert code == 0 and "ii34(x,y)" in out


def test_decide_exit_codes(capsys):
    assert run(capsys, "decide", "--rule", "den-ip2-eqi")[0] == 0
    code, out = run(capsys, "decide", "--rule", "den-ip2-eqi", "--theory", "DISCRETE_UNBOUNDED")
    assert code == 1 and "x=[0,1]" in out


def test_usage_errors_exit_two(capsys):
    assert main(["closure", "--class", "den", "--set", "ip9"]) == 2
    with pytest.raises(SystemExit) as ei:
        main(["no-such-command"])
    assert ei.value.code == 2


def test_closure_and_spectrum(capsys):
    code, out = run(capsys, "closure", "--class", "den", "--set", "ii44")
    assert code == 0 and "eqi" in out
    code, out = run(capsys, "spectrum", "--class", "den", "--target", "eqp", "--format", "tsv")
    assert code == 0 and "@class Den" in out and "eqp\tlt" in out


def test_harvest_against_bundled_expectation(capsys):
    from importlib import resources
    path = resources.files("pointinterval").joinpath("data/tables/den_harvest.txt")
    code, out = run(capsys, "harvest", "--class", "den", "--expected", str(path))
    assert code == 0 and "0 MISSING, 0 EXTRA" in out


def test_verify_zeta_single(capsys):
    code, out = run(capsys, "verify-zeta", "--id", "den-stretch", "--samples", "200")
    assert code == 0 and "den-stretch: PASS" in out
