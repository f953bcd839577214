import csv
import json
import math

import pytest
from click.testing import CliRunner

from conductors.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestTheory:
    def test_outputs(self, runner, tmp_path):
        res = runner.invoke(main, ["theory", "--grid", "0:496:49.6",
                                   "--out", str(tmp_path)])
        assert res.exit_code == 0
        header, rows = _read_csv(tmp_path / "theory_cdf.csv")
        assert header == ["lambda", "cdf"]
        assert len(rows) == 11  # inclusive grid 0, 49.6, ..., 496
        assert float(rows[0][1]) == 0.0
        assert float(rows[-1][0]) == 496.0
        assert float(rows[-1][1]) == pytest.approx(1.0, abs=1e-6)
        cdfs = [float(r[1]) for r in rows]
        assert cdfs == sorted(cdfs)
        assert (tmp_path / "theory_cdf.png").stat().st_size > 0

    def test_pdf_flag(self, runner, tmp_path):
        res = runner.invoke(main, ["theory", "--grid", "0:4.96:0.496",
                                   "--pdf", "--out", str(tmp_path)])
        assert res.exit_code == 0
        header, rows = _read_csv(tmp_path / "theory_pdf.csv")
        assert header == ["lambda", "density"]
        assert all(float(r[1]) >= 0 for r in rows)
        assert (tmp_path / "theory_pdf.png").stat().st_size > 0

    def test_invalid_grid_exits_2(self, runner, tmp_path):
        for bad in ("1:2", "abc", "-1:10:1", "5:1:1", "0:10:0"):
            res = runner.invoke(main, ["theory", "--grid", bad,
                                       "--out", str(tmp_path)])
            assert res.exit_code == 2, bad


class TestEnumerate:
    def test_smallest_family(self, runner):
        res = runner.invoke(main, ["enumerate", "--h", "1"])
        assert res.exit_code == 0
        summary = json.loads(res.output)
        assert summary["count"] == 1  # only (a, b) = (1, 1)

    def test_dump_invariant(self, runner, tmp_path):
        dump = tmp_path / "curves.csv"
        res = runner.invoke(main, ["enumerate", "--h", "10000",
                                   "--dump", str(dump)])
        assert res.exit_code == 0
        header, rows = _read_csv(dump)
        assert header == ["a", "b", "delta", "conductor"]
        summary = json.loads(res.output)
        assert summary["count"] == len(rows) == 231
        for a, b, delta, n in rows:
            a, b, delta, n = int(a), int(b), int(delta), int(n)
            assert delta == -16 * (4 * a**3 + 27 * b**2)
            assert abs(delta) % n == 0

    def test_budget_exit_3(self, runner):
        res = runner.invoke(main, ["enumerate", "--h", "1e11"])
        assert res.exit_code == 3

    def test_bad_residue_exit_2(self, runner):
        res = runner.invoke(main, ["enumerate", "--h", "100", "--r", "3"])
        assert res.exit_code == 2
        res = runner.invoke(main, ["enumerate", "--h", "100", "--t", "2"])
        assert res.exit_code == 2

    def test_twelve_digit_reference(self, runner):
        res = runner.invoke(main, ["enumerate", "--h", "1"])
        summary = json.loads(res.output)
        zeta6_10 = summary["count_over_H56"]  # count = 1, H = 1
        assert zeta6_10 == 1.0
        assert summary["reference_density"] == pytest.approx(
            1.0 / 9.0, rel=1e-3)  # zeta^(6)(10) is close to 1


class TestCompare:
    def test_outputs(self, runner, tmp_path):
        res = runner.invoke(main, ["compare", "--h", "1e4",
                                   "--grid", "0:496:49.6",
                                   "--out", str(tmp_path)])
        assert res.exit_code == 0
        for name in ("report.csv", "mass.csv", "counts.csv",
                     "report.png", "summary.json"):
            assert (tmp_path / name).exists(), name

        header, rows = _read_csv(tmp_path / "report.csv")
        assert header == ["lambda", "cdf_empirical", "cdf_theory", "abs_diff"]
        assert len(rows) == 10  # zero lambda dropped
        for lam, emp, th, diff in rows:
            assert float(diff) == pytest.approx(
                abs(float(emp) - float(th)), abs=1e-10)

        header, rows = _read_csv(tmp_path / "mass.csv")
        assert header == ["m", "freq_empirical", "w_theory"]
        by_m = {int(r[0]): (float(r[1]), float(r[2])) for r in rows}
        assert by_m[3] == (0.0, 0.0)

        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["n_curves"] == 231
        assert 0.0 <= summary["sup_distance"] <= 1.0

    def test_budget_exit_3(self, runner, tmp_path):
        res = runner.invoke(main, ["compare", "--h", "1e11",
                                   "--out", str(tmp_path)])
        assert res.exit_code == 3


class TestIdentities:
    def test_passes_at_q7(self, runner, tmp_path):
        out = tmp_path / "checks.json"
        res = runner.invoke(main, ["identities", "--q", "7",
                                   "--out", str(out)])
        assert res.exit_code == 0, res.output
        checks = json.loads(out.read_text())
        assert all(c["pass"] for c in checks)
        names = {c["check"] for c in checks}
        assert "zeta_ratio_closed_form" in names
        assert "S_Q1_count_q7" in names
        assert "census_p5_I0star" in names

    def test_rejects_small_q(self, runner):
        res = runner.invoke(main, ["identities", "--q", "5"])
        assert res.exit_code == 2
