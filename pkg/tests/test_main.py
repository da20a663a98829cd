import pytest

from quasiminimal import params
from quasiminimal.automata import compile_regex
from quasiminimal.constructions import TransitiveLT, largest_radius
from quasiminimal.main import run
from quasiminimal.oracle import parse_oracle
from quasiminimal.substitution import decide_regular_intersection, format_substitution, named, subsystem_count_B
from quasiminimal.template import SUNNY

ORACLE = "1 halts 0\n2 never\n3 halts 2\ndefault never\n"


def cli(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    lines = captured.out.strip().splitlines()
    result = lines[-1].removeprefix("RESULT: ") if lines and lines[-1].startswith("RESULT: ") else None
    return code, result, captured


def test_ruler(capsys):
    assert cli(capsys, "ruler", "value", "--i", "7")[:2] == (0, "3")
    assert cli(capsys, "ruler", "positions", "--j", "2")[:2] == (0, "3 + 8n")
    assert cli(capsys, "ruler", "window", "--from", "0", "--to", "7")[:2] == (0, "0 1 0 2 0 1 0")


@pytest.mark.parametrize("argv,expected", [
    (["lang", "monoid", "--family", "regex", "--alphabet", "ab", "--spec", "a*ba*"], "2"),
    (["lang", "monoid", "--family", "regex", "--alphabet", "a", "--spec", "(aa)*"], "NOT-APERIODIC"),
    (["lang", "build", "--family", "regex", "--alphabet", "ab", "--spec", "a*b", "--word", "aab"], "YES"),
    (["lang", "build", "--family", "regex", "--alphabet", "ab", "--spec", "a*b", "--word", "ba"], "NO"),
])
def test_lang(capsys, argv, expected):
    code, result, _ = cli(capsys, *argv)
    assert code == 0
    assert result == expected


def test_count_b(capsys):
    assert cli(capsys, "subst", "count-b", "--k", "5")[1] == str(subsystem_count_B(5)) == "1069742"


def test_subst_commands(capsys, write):
    ruler_gaps = write("gaps.txt", "0 -> 00\n1 -> 101\n")
    fibonacci = write("fib.txt", "1 -> 12\n2 -> 1\n")
    pumping = write("pump.txt", "0 -> 0\n1 -> 010\n")
    assert cli(capsys, "subst", "iterate", "--file", ruler_gaps, "--letter", "1", "--n", "2")[1] == "10100101"
    assert cli(capsys, "subst", "long", "--file", pumping)[1] == "1"
    assert cli(capsys, "subst", "syndetic", "--file", fibonacci)[1] == "SYNDETIC m=1"
    assert cli(capsys, "subst", "syndetic", "--file", pumping)[1].startswith("NON-SYNDETIC letter=1")


def test_modelcheck(capsys, write):
    fibonacci = write("fib.txt", "1 -> 12\n2 -> 1\n")
    code, result, captured = cli(capsys, "subst", "modelcheck", "--file", fibonacci, "--letter", "1",
                                 "--regex", "@*22@*")
    assert code == 0 and result.startswith("NO t=")
    assert "relations repeat" in captured.out
    assert cli(capsys, "subst", "modelcheck", "--file", fibonacci, "--regex", "@*11@*")[1].startswith("YES letter=")


def test_modelcheck_matches_the_library(capsys, write):
    tau = named("ruler-gaps")
    path = write("gaps.txt", format_substitution(tau))
    cert = decide_regular_intersection(tau, 1, compile_regex("@*1001@*", tau.alphabet))
    assert cli(capsys, "subst", "modelcheck", "--file", path, "--letter", "1", "--regex", "@*1001@*")[1] \
        == f"YES n={cert.n}" == "YES n=2"


def test_templates(capsys, write):
    sunny = write("sunny.txt", SUNNY + "\n")
    assert cli(capsys, "template", "cb-rank", "--file", sunny)[1] == "2"
    assert cli(capsys, "template", "member", "--file", sunny, "--word", "11")[1] == "NO"
    code, result, captured = cli(capsys, "template", "halting", "--file", sunny, "--from", "1", "--to", "0")
    assert result == "YES j=1"
    assert "witness:" in captured.out
    assert cli(capsys, "template", "tuple", "--file", sunny, "--words", "1,1")[1] == "NO"


def test_order(capsys):
    assert cli(capsys, "order", "leq", "--system", "sunny", "--u", "01", "--v", "1")[1] == "PROVEN h=1 k=2"
    assert cli(capsys, "--budget", "3", "order", "generator", "--system", "golden-mean", "--word", "0 1")[1] \
        .startswith("UNKNOWN witness=")


def test_construct_and_decide(capsys, write):
    oracle = write("oracle.txt", ORACLE)
    code, result, captured = cli(capsys, "construct", "oneminimal", "--oracle", oracle, "--count", "2")
    assert (code, result) == (0, "points=2")
    assert "x_1 = " in captured.out and "x_2 = " in captured.out
    code, result, captured = cli(capsys, "decide", "--system", "modular", "--problem", "modular", "--j", "1",
                                 "--oracle", oracle)
    assert (code, result) == (0, "YES")
    assert "agree: YES" in captured.out
    assert cli(capsys, "decide", "--system", "oneminimal", "--problem", "halting", "--j", "2",
               "--oracle", oracle)[1] == "NO"
    assert cli(capsys, "construct", "dyck", "--oracle", oracle, "--depth", "1")[1] == "lengths=1,57"


def test_exit_codes(capsys, write):
    oracle = write("oracle.txt", ORACLE)
    assert cli(capsys, "ruler", "nope")[0] == 1
    assert cli(capsys)[0] == 1
    assert cli(capsys, "decide", "--system", "modular", "--problem", "counting", "--j", "1",
               "--oracle", oracle)[0] == 1
    assert cli(capsys, "subst", "iterate", "--file", str(write("x.txt", "0 -> 0\n")))[0] == 1
    assert cli(capsys, "template", "cb-rank", "--file", "/nonexistent/templates.txt")[0] == 1
    code, result, captured = cli(capsys, "construct", "dyck", "--oracle", oracle, "--depth", "5")
    assert (code, result) == (2, None)
    assert "budget exceeded" in captured.err


def test_config_file(capsys, write):
    config = write("params.yaml", "budget:\n  dyck_depth: 1\n")
    oracle = write("oracle.txt", ORACLE)
    code, _, captured = cli(capsys, "--config", config, "construct", "dyck", "--oracle", oracle, "--depth", "2")
    assert code == 2
    assert params.BUDGET.dyck_depth == 1
    assert cli(capsys, "--config", write("bad.yaml", "budget:\n  nope: 1\n"), "ruler", "value")[0] == 1


def test_plot(capsys, tmp_path):
    code, result, captured = cli(capsys, "plot", "--out", str(tmp_path))
    assert (code, result) == (0, "figures=4")
    assert (tmp_path / "graph1_ruler.png").exists()
    assert captured.out.count("[OK] Saved:") == 4


def test_construct_translt(capsys, write):
    oracle = write("oracle.txt", ORACLE)
    t = TransitiveLT(parse_oracle(ORACLE))
    radius = largest_radius(t.window)
    window = t.window(radius)
    code, result, captured = cli(capsys, "construct", "translt", "--oracle", oracle)
    assert code == 0
    assert result == f"length={len(window.word)} blocks={len(window.indices)}"
    assert f"radius {radius}: " in captured.out
