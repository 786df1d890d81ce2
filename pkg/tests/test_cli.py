import json

import pytest
from click.testing import CliRunner

import main
from main import cli
from projects.modules.errors import InvariantError


@pytest.fixture
def runner():
    return CliRunner()


def test_enumerate(runner):
    result = runner.invoke(cli, ["enumerate", "--n", "4"])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == [
        "n=4 count=4", "(((())))", "((()()))", "((())())", "(()()())",
    ]


def test_separation_all_routes(runner):
    result = runner.invoke(cli, ["separation", "--n", "4", "--r-max", "5", "--route", "all"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "n,r,s_star,route"
    assert len(lines) == 1 + 5 * 3
    assert "4,2,1/2,eigen-formula" in lines
    assert "4,2,1/2,A-recurrence" in lines
    assert "4,2,1/2,matrix-power" in lines


def test_separation_json(runner):
    result = runner.invoke(cli, ["separation", "--n", "4", "--r-max", "2", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["meta"]["command"] == "separation"
    assert payload["meta"]["config"]["n"] == 4
    assert payload["data"][1] == {
        "n": 4, "r": 2, "s_star": {"num": "1", "den": "2"}, "route": "eigen-formula",
    }


def test_measure_and_kernel(runner):
    result = runner.invoke(cli, ["measure", "--n", "4"])
    assert result.stdout.splitlines()[2] == "((())()),1/2"
    result = runner.invoke(cli, ["kernel", "--n", "4"])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[1] == "(((()))),1/6,1/3,1/2,0/1"


def test_stats_and_spectrum(runner):
    result = runner.invoke(cli, ["stats", "--n", "4"])
    assert result.stdout.splitlines()[0] == "encoding,m,n,sg_order,hook_product"
    assert "(()()()),6,1,6,4" in result.stdout.splitlines()
    result = runner.invoke(cli, ["spectrum", "--n", "4"])
    assert result.stdout.splitlines() == ["eigenvalue,multiplicity", "1/1,1", "1/2,1", "0/1,2"]


def test_limit(runner):
    result = runner.invoke(cli, ["limit", "--c", "1.0", "--tol", "1e-12"])
    assert result.exit_code == 0
    header, row = result.stdout.splitlines()
    assert header == "c,value,terms_used,tail_bound"
    assert float(row.split(",")[1]) == pytest.approx(0.0245735, abs=2e-6)


def test_limit_with_size(runner):
    result = runner.invoke(cli, ["limit", "--n", "40"])
    assert result.exit_code == 0
    header, row = result.stdout.splitlines()
    assert header.endswith("n,r,s_star_float")
    assert row.split(",")[5] == "1600"


def test_sample_is_deterministic(runner):
    args = ["sample", "--n", "4", "--samples", "2000", "--r-max", "3", "--seed", "11"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    kinds = [line.split(",")[0] for line in first.stdout.splitlines()[1:]]
    assert kinds == ["state"] * 4 + ["tail"] * 3


def test_output_file(runner, tmp_path):
    target = tmp_path / "trees.txt"
    result = runner.invoke(cli, ["enumerate", "--n", "3", "--output", str(target)])
    assert result.exit_code == 0
    assert result.stdout == ""
    assert target.read_text(encoding="utf-8") == "n=3 count=2\n((()))\n(()())\n"


def test_matrix_dumps(runner):
    result = runner.invoke(cli, ["matrix", "--n", "3"])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == [
        "rows=2 cols=4 nnz=5", "0 0 1", "0 1 1", "0 2 1", "1 2 2", "1 3 1",
    ]
    result = runner.invoke(cli, ["matrix", "--n", "4", "--operator", "pruning", "--power", "3"])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["rows=4 cols=1 nnz=4", "0 0 1", "1 0 2", "2 0 3", "3 0 6"]
    result = runner.invoke(cli, ["matrix", "--n", "1", "--power", "3", "--format", "json"])
    payload = json.loads(result.stdout)
    assert payload["data"] == [{"rows": 1, "cols": 4, "entries": [[0, 0, "1"], [0, 1, "1"], [0, 2, "3"], [0, 3, "1"]]}]


@pytest.mark.parametrize("args", [
    ["enumerate"],
    ["enumerate", "--n", "0"],
    ["separation", "--n", "4", "--r-max", "0"],
    ["separation", "--n", "2", "--route", "recurrence"],
    ["separation", "--n", "4", "--route", "fastest"],
    ["limit", "--c", "-1"],
    ["matrix", "--n", "4", "--operator", "pruning", "--power", "4"],
    ["matrix", "--n", "4", "--power", "0"],
])
def test_usage_errors(runner, args):
    assert runner.invoke(cli, args).exit_code == 2


@pytest.mark.parametrize("args", [
    ["enumerate", "--n", "15"],
    ["kernel", "--n", "13"],
    ["separation", "--n", "9", "--route", "bruteforce"],
])
def test_resource_errors(runner, args):
    assert runner.invoke(cli, args).exit_code == 3


def test_invariant_failure_exit_code(runner, monkeypatch):
    def broken(stop_on_failure=True):
        raise InvariantError("commutator", "n=3")

    monkeypatch.setattr(main, "run_suite", broken)
    result = runner.invoke(cli, ["verify"])
    assert result.exit_code == 1
    assert "n=3" in result.stderr
