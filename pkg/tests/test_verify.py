import numpy as np
import pytest

from mgx.lib.report.report_generator import ReportGenerator
from mgx.lib.verify.verify import FAIL, PASS, SKIPPED, list_checks, random_uniform_loop_pattern, run_verify
from mgx.lib.utilities.exceptions import InputError


def test_registry():
    names = list_checks()
    assert names[0] == "sigma-closed-forms"
    assert {"pi-closed-forms", "large-a-gate", "oracle-ground-truth", "petersen-pipeline", "clone-reduce"} <= set(names)


@pytest.mark.parametrize("name", ["sigma-closed-forms", "averaging-exact-range", "large-a-gate", "cross-law"])
def test_fast_checks_pass(name):
    table = run_verify(only=[name], n_jobs=1)
    assert table["status"].tolist() == [PASS]
    assert table.attrs["passed"]
    assert table.attrs["skipped"] == 0


def test_budget_skips_check():
    table = run_verify(only=["oracle-ground-truth"], budget=1, n_jobs=1)
    assert table["status"].tolist() == [SKIPPED]
    assert not table.attrs["passed"]
    assert table.attrs["skipped"] == 1


def test_unknown_names():
    with pytest.raises(InputError):
        run_verify(only=["no-such-check"])
    with pytest.raises(InputError):
        run_verify(suite="other")


def test_random_patterns_have_uniform_loops():
    rng = np.random.default_rng(0)
    for _ in range(20):
        P = random_uniform_loop_pattern(rng)
        assert P.uniform_loop() is not None
        assert 1 <= P.k <= 6


def test_report_render():
    table = run_verify(only=["large-a-gate", "oracle-ground-truth"], budget=1, n_jobs=1)
    html = ReportGenerator().render(table, version="0.1.0")
    assert "large-a-gate" in html
    assert "Not all checks passed" in html
    assert "1 passed, 0 failed, 1 skipped" in html
    assert FAIL not in table["status"].tolist()


def test_report_file(tmp_path):
    table = run_verify(only=["large-a-gate"], n_jobs=1)
    path = tmp_path / "report.html"
    ReportGenerator().generate_report(table, str(path))
    assert "All checks passed" in path.read_text()


def test_paper_suite_is_default():
    table = run_verify(suite="paper", only=["averaging-exact-range"], n_jobs=1)
    assert table.attrs["passed"]
    assert table.attrs["suite"] == "paper"


@pytest.mark.slow
@pytest.mark.parametrize("name", ["turan-growth", "turan-blowup"])
def test_turan_checks_pass(name):
    table = run_verify(only=[name], n_jobs=1)
    assert table["status"].tolist() == [PASS]
