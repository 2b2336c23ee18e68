import json

import pytest
from click.testing import CliRunner

from weighted_brauer import cli as cli_module
from weighted_brauer.cli import cli, run


def run_json(capsys, *args):
    report, code = run([*args, "--json"])
    return json.loads(capsys.readouterr().out), report, code


def test_brauer_json(capsys):
    output, report, code = run_json(capsys, "brauer", "1", "2", "4")
    assert code == 0
    assert output["status"] == "ok"
    assert output["command"] == "brauer"
    assert output["inputs"] == {"weights": [1, 2, 4]}
    assert output["payload"]["E2_01"] == {"rank": 0, "torsion": []}
    assert output == report.to_dict()


def test_brauer_with_pages(capsys):
    output, _, code = run_json(capsys, "brauer", "1", "2", "4", "--pages")
    assert code == 0
    pages = output["payload"]["pages"]
    assert pages["E1"]["0,1"] == {"rank": 0, "torsion": [2, 4]}
    assert pages["d2_iso"] is True


def test_normalize(capsys):
    output, _, code = run_json(capsys, "normalize", "2", "4", "6")
    assert code == 0
    assert output["payload"]["normal_form"] == [1, 2, 3]
    assert output["payload"]["total_s"] == 1


def test_iso_with_double_dash(capsys):
    output, _, code = run_json(capsys, "iso", "2", "3", "5", "--", "5", "3", "2")
    assert code == 0
    assert output["payload"]["isomorphic"] is True
    assert output["inputs"] == {"first": [2, 3, 5], "second": [5, 3, 2]}

    output, _, _ = run_json(capsys, "iso", "1", "2", "3", "vs", "1", "2", "4")
    assert output["payload"]["isomorphic"] is False


def test_fan(capsys):
    output, _, code = run_json(capsys, "fan", "2", "3", "5")
    assert code == 0
    assert output["payload"]["smooth"] is False
    assert output["payload"]["singular_cones"] == [[1, 2], [0, 2], [0, 1]]


def test_class_groups(capsys):
    output, _, code = run_json(capsys, "class-groups", "1", "2", "3")
    assert code == 0
    assert output["payload"] == {
        "class_group": {"rank": 1, "degrees": [1, 2, 3]},
        "picard_index": 6,
        "stack_pullback_multiplier": 6,
    }


def test_cohomology_with_basis(capsys):
    output, _, code = run_json(capsys, "cohomology", "1", "2", "--i", "0", "--ell", "2", "--basis")
    assert code == 0
    assert output["payload"]["dim"] == 2
    assert output["payload"]["basis"] == [[2, 0], [0, 1]]
    assert output["payload"]["stack"] is False


def test_twist(capsys):
    output, _, code = run_json(capsys, "twist", "1", "2", "--ell", "1")
    assert code == 0
    assert output["payload"]["monomial_text"] == "t0"
    assert output["payload"]["target"] == [1, 1]


def test_sweep(capsys):
    output, _, code = run_json(capsys, "sweep", "--dim", "2", "--max-weight", "4")
    assert code == 0
    payload = output["payload"]
    assert payload["checked"] == 20
    assert payload["failures"] == []
    assert all(payload[key] for key in payload if key.startswith("all_"))


def test_dilation(capsys):
    output, _, code = run_json(capsys, "dilation", "1", "2", "4", "--d", "2")
    assert code == 0
    assert output["payload"]["commutes"] is True
    assert output["payload"]["multiplication_by_d"] is True
    assert output["payload"]["E1_kernels"]["0,1"] == {"rank": 0, "torsion": [2, 2]}


def test_p_reduce(capsys):
    output, _, code = run_json(capsys, "p-reduce", "12", "10", "15", "--p", "2")
    assert code == 0
    assert output["payload"]["reduced"] == [4, 2, 1]
    assert output["payload"]["E2_agree"] is True


@pytest.mark.parametrize("args", [
    ["brauer", "0", "1"],
    ["brauer", "1"],
    ["brauer", "-1", "2"],
    ["brauer"],
    ["cohomology", "1", "2", "3", "--i", "5", "--ell", "0"],
    ["cohomology", "1", "1", "--i", "0", "--ell", "1000000000"],
    ["cohomology", "1", "1", "--i", "1", "--ell", "-1000000000", "--basis"],
    ["p-reduce", "1", "2", "--p", "4"],
    ["iso", "1", "2", "3"],
    ["no-such-command"],
])
def test_invalid_input_exits_with_one(args, capsys):
    report, code = run(args)
    assert code == 1
    assert report.status == "invalid-input"
    assert capsys.readouterr().err


def test_invalid_input_json_report(capsys):
    output, _, code = run_json(capsys, "brauer", "0", "1")
    assert code == 1
    assert output["status"] == "invalid-input"
    assert "positive" in output["payload"]["error"]


def test_cohomology_twist_limit_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("WEIGHTED_BRAUER_TWIST_LIMIT", "5")
    output, _, code = run_json(capsys, "cohomology", "1", "1", "--i", "0", "--ell", "5")
    assert code == 0
    assert output["payload"]["dim"] == 6

    output, _, code = run_json(capsys, "cohomology", "1", "1", "--i", "0", "--ell", "6")
    assert code == 1
    assert "limit" in output["payload"]["error"]


def test_internal_error_exits_with_two(monkeypatch, capsys):
    def broken(w):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli_module, "normalize", broken)
    output, _, code = run_json(capsys, "normalize", "1", "2")
    assert code == 2
    assert output["status"] == "internal-error"
    assert output["payload"]["error"] == "boom"


def test_output_is_deterministic(capsys):
    first, _, _ = run_json(capsys, "brauer", "2", "3", "5", "--pages")
    second, _, _ = run_json(capsys, "brauer", "2", "3", "5", "--pages")
    assert first == second


def test_out_file(tmp_path, capsys):
    target = tmp_path / "reports" / "normalize.json"
    report, code = run(["normalize", "1", "2", "4", "--out", str(target)])
    assert code == 0
    assert target.read_text() == report.to_json()
    assert "normal_form" in capsys.readouterr().out


def test_help_returns_no_report(capsys):
    report, code = run(["--help"])
    assert report is None
    assert code == 0
    assert "brauer" in capsys.readouterr().out


def test_click_runner_surface():
    runner = CliRunner()
    result = runner.invoke(cli, ["brauer", "2", "3", "5", "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["payload"]["E2_01"] == {"rank": 0, "torsion": []}

    result = runner.invoke(cli, ["cohomology", "--help"])
    assert result.exit_code == 0
    assert "--basis" in result.output
