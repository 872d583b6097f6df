"""
Command line front end, driven through main(argv)
"""
import json

import pytest

from mgx.cli import EXIT_BUDGET, EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from mgx.lib.core.multigraph import is_sq_graph, read_multigraph


def run_json(capsys, *argv):
    code = main(["--json", "--threads", "1", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_sigma(capsys):
    code, payload = run_json(capsys, "sigma", "--name", "K1_3", "--a", "1")
    assert code == EXIT_OK
    assert payload["sigma"] == {"num": 6, "den": 5}
    assert payload["weighting"][0] == {"num": 2, "den": 5}


def test_pi_and_cross_law(capsys):
    code, payload = run_json(capsys, "pi", "--name", "C_6", "--a", "2")
    assert code == EXIT_OK
    assert payload["certified"]

    code, payload = run_json(capsys, "sigma", "--both", "--name", "C_5", "--a", "2")
    assert code == EXIT_OK
    assert payload["cross_law"]


def test_blowup_max(capsys):
    code, payload = run_json(capsys, "blowup-max", "--name", "K1_3", "--a", "1", "--n", "10")
    assert code == EXIT_OK
    assert payload["value"] == 60
    assert payload["witness"] == [4, 2, 2, 2]


def test_turan_rows(capsys):
    code, payload = run_json(capsys, "turan", "--r", "1,1", "--a", "2", "--n", "6", "--n-from", "2")
    assert code == EXIT_OK
    assert [row["sigma_n"] for row in payload["rows"]] == [3, 8, 15, 25, 37]
    assert "asymptotics" in payload


def test_bounds(capsys):
    code, payload = run_json(capsys, "bounds", "fk-m", "--s", "3", "--q", "2")
    assert code == EXIT_OK
    assert payload["m"] == {"num": 1, "den": 2}

    code, payload = run_json(capsys, "bounds", "flat", "--r", "2", "--a", "2", "--s", "5")
    assert (payload["q_low"], payload["q_high"]) == (26, 27)

    code, payload = run_json(capsys, "bounds", "gate", "--r0", "1", "--rd", "1", "--d", "1", "--a", "2")
    assert payload["gate"]


@pytest.mark.parametrize("argv", [
    ["bounds", "gate", "--r0", "1", "--rd", "1", "--d", "2", "--a", "2"],
    ["bounds", "fk-m", "--s", "3"],
    ["sigma"],
    ["verify", "--only", "no-such-check"],
])
def test_bad_input_exit_code(capsys, argv):
    assert main(["--threads", "1", *argv]) == EXIT_INPUT


def test_admissible(capsys, tmp_path):
    path = tmp_path / "tur.json"
    path.write_text(json.dumps({"turan": {"r": [1, 1], "a": 2}}))
    assert main(["--threads", "1", "admissible", "--pattern", str(path), "--s", "4", "--q", "15"]) == EXIT_OK
    assert main(["--threads", "1", "admissible", "--pattern", str(path), "--s", "4", "--q", "14"]) == EXIT_FAILED


def test_oracle_witness(capsys, tmp_path):
    path = str(tmp_path / "witness.mg")
    code, payload = run_json(capsys, "oracle", "--n", "4", "--s", "3", "--q", "6", "--objective", "product",
                             "--witness", path)
    assert code == EXIT_OK
    assert payload["value"] == 64
    assert is_sq_graph(read_multigraph(path), 3, 6).ok


def test_budget_exit_code(capsys):
    code, payload = run_json(capsys, "--budget", "5", "blowup-max", "--name", "C_5", "--a", "2", "--n", "20",
                             "--objective", "product")
    assert code == EXIT_BUDGET
    assert payload["error"] == "budget"
    assert payload["best_lower_bound"]["certified"] == "local"


def test_survey(capsys, tmp_path):
    csv = tmp_path / "survey.csv"
    code, payload = run_json(capsys, "survey", "--s", "6", "--a", "1", "--max-vertices", "4", "--max-degree", "3",
                             "--q-from", "20", "--q-to", "21", "--csv", str(csv))
    assert code == EXIT_OK
    assert [row["best_density"] for row in payload["rows"]] == ["8/7", "6/5"]
    assert csv.exists()


def test_verify_report(capsys, tmp_path):
    report = tmp_path / "report.html"
    code = main(["--threads", "1", "verify", "--only", "large-a-gate,averaging-exact-range", "--report",
                 str(report)])
    assert code == EXIT_OK
    assert "averaging-exact-range" in capsys.readouterr().out
    assert "large-a-gate" in report.read_text()


def test_verify_skipped_is_not_success(capsys):
    assert main(["--threads", "1", "--budget", "1", "verify", "--only", "oracle-ground-truth"]) == EXIT_FAILED


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "mgx" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["blowup-max", "--name", "K1_3", "--a", "1", "--n", "10", "--budget", "1e9", "--json", "--threads", "1"],
    ["--threads", "1", "blowup-max", "--name", "K1_3", "--a", "1", "--n", "10", "--budget", "1e9", "--json"],
    ["--json", "--budget", "1e9", "blowup-max", "--name", "K1_3", "--a", "1", "--n", "10", "--threads", "1"],
])
def test_global_flags_on_either_side(capsys, argv):
    assert main(argv) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == 60


def test_flags_after_subcommand(capsys):
    assert main(["bounds", "gate", "--r0", "1", "--rd", "1", "--d", "1", "--a", "2", "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["gate"]

    assert main(["oracle", "--n", "3", "--s", "3", "--q", "3", "--threads", "1", "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == 3


def test_budget_after_subcommand_applies(capsys):
    code = main(["--threads", "1", "blowup-max", "--name", "C_5", "--a", "2", "--n", "20", "--objective", "product",
                 "--budget", "5e0", "--json"])
    assert code == EXIT_BUDGET


@pytest.mark.parametrize("budget", ["lots", "0"])
def test_bad_budget_rejected(budget):
    with pytest.raises(SystemExit) as exc:
        main(["blowup-max", "--name", "K1_3", "--n", "5", "--budget", budget])
    assert exc.value.code == 2


def test_verify_paper_suite(capsys):
    assert main(["verify", "--suite", "paper", "--only", "averaging-exact-range", "--threads", "1"]) == EXIT_OK
    assert main(["verify", "--suite", "other", "--threads", "1"]) == EXIT_INPUT
