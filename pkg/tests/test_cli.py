import csv
import io
import json

import numpy as np
import pytest
from click.testing import CliRunner

from twomode_jcx.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def parse_csv(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    meta = {}
    for ln in text.splitlines():
        if ln.startswith("# "):
            key, _, val = ln[2:].partition("=")
            meta[key] = val
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    return rows, meta


class TestSpectrumCommand:
    def test_dirac2p1_column(self, runner):
        result = runner.invoke(
            main,
            ["spectrum", "--case", "dirac2p1", "--omega", "0.1", "--nmax", "5",
             "--mmax", "0", "--format", "json"],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["schema_version"] == 1
        # m_n = 0 rows: both inner families coincide and give sqrt(1 + 0.4 n)
        plus_rows = [r for r in payload["rows"] if r["branch"] == "plus"]
        for n_l in range(6):
            ref = np.sqrt(1 + 0.4 * n_l)
            assert any(abs(r["energy"] - ref) < 1e-12 for r in plus_rows)

    def test_empty_grid(self, runner):
        result = runner.invoke(
            main, ["spectrum", "--nmax", "-1", "--mmax", "3", "--format", "json"]
        )
        assert result.exit_code == 0
        assert json.loads(result.output)["rows"] == []

    def test_json_csv_identical_numbers(self, runner, tmp_path):
        args = ["spectrum", "--f-re", "2", "--g-re", "1", "--nmax", "2", "--mmax", "2"]
        r_json = runner.invoke(main, args + ["--format", "json"])
        r_csv = runner.invoke(main, args + ["--format", "csv"])
        assert r_json.exit_code == 0 and r_csv.exit_code == 0
        json_rows = json.loads(r_json.output)["rows"]
        csv_rows, _ = parse_csv(r_csv.output)
        assert len(json_rows) == len(csv_rows)
        for a, b in zip(json_rows, csv_rows):
            assert float(b["energy"]) == a["energy"]  # 17 digits round-trip

    def test_out_file(self, runner, tmp_path):
        path = tmp_path / "levels.csv"
        result = runner.invoke(
            main, ["spectrum", "--nmax", "1", "--mmax", "1", "--format", "csv",
                   "--out", str(path)]
        )
        assert result.exit_code == 0
        text = path.read_text()
        assert text.splitlines()[0] == "n_l,m_n,branch,inner_sign,energy"
        assert "\r" not in text


class TestDiagonalizeCommand:
    def test_small_run(self, runner):
        result = runner.invoke(
            main,
            ["diagonalize", "--model", "jc-jc", "--f-re", "1", "--g-re", "1",
             "--cutoff", "16", "--sector", "3", "--count", "4", "--format", "json"],
        )
        assert result.exit_code == 0, result.output
        rows = json.loads(result.output)["rows"]
        assert len(rows) == 4
        assert all(r["sector"] == 3 for r in rows)
        vals = [r["energy_sq"] for r in rows]
        assert vals == sorted(vals)

    def test_cutoff_minimum_enforced(self, runner):
        result = runner.invoke(main, ["diagonalize", "--cutoff", "2"])
        assert result.exit_code == 2

    def test_degenerate_su11_coupling_reports_domain_error(self, runner):
        result = runner.invoke(
            main,
            ["diagonalize", "--model", "jc-ajc", "--f-re", "1", "--g-re", "1",
             "--cutoff", "16", "--sector", "0", "--count", "20"],
        )
        assert result.exit_code != 0


class TestVerifyCommand:
    def test_fast_profile_passes(self, runner):
        result = runner.invoke(
            main, ["verify", "--cutoff", "60", "--format", "json"]
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        statuses = {r["status"] for r in payload["rows"]}
        assert statuses <= {"PASS", "SKIP"}
        assert any(r["status"] == "PASS" for r in payload["rows"])

    def test_degenerate_coupling_skips(self, runner):
        result = runner.invoke(
            main,
            ["verify", "--f-re", "1", "--g-re", "1", "--cutoff", "60",
             "--format", "json"],
        )
        assert result.exit_code == 0, result.output
        rows = json.loads(result.output)["rows"]
        skipped = [r for r in rows if r["status"] == "SKIP"]
        assert skipped
        assert any("|f| = |g|" in r["detail"] for r in skipped)

    def test_seeded_reports_byte_identical(self, runner, tmp_path):
        args = ["verify", "--cutoff", "60", "--seed", "7", "--format", "json"]
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        r1 = runner.invoke(main, args + ["--out", str(p1)])
        r2 = runner.invoke(main, args + ["--out", str(p2)])
        assert r1.exit_code == 0 and r2.exit_code == 0
        assert p1.read_bytes() == p2.read_bytes()


class TestWavefunctionCommand:
    def test_oscillator_grid(self, runner):
        result = runner.invoke(
            main,
            ["wavefunction", "--n-l", "0", "--m-n", "0", "--n-rho", "20",
             "--n-phi", "8", "--format", "csv"],
        )
        assert result.exit_code == 0, result.output
        rows, meta = parse_csv(result.output)
        assert len(rows) == 20 * 8
        assert list(rows[0].keys()) == ["rho", "phi", "re", "im", "abs2"]
        assert abs(float(meta["norm_estimate"]) - 1.0) <= 1e-6

    def test_zeta_zero_matches_oscillator_file(self, runner):
        base = ["wavefunction", "--n-l", "1", "--m-n", "1", "--n-rho", "10",
                "--n-phi", "6", "--format", "csv"]
        r1 = runner.invoke(main, base)
        r2 = runner.invoke(main, base + ["--zeta-re", "0", "--zeta-im", "0"])
        assert r1.output == r2.output

    def test_deterministic(self, runner):
        args = ["wavefunction", "--n-l", "1", "--m-n", "2", "--zeta-re", "0.2",
                "--n-rho", "8", "--n-phi", "4", "--format", "json"]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output

    def test_singular_zeta_exit_code(self, runner):
        result = runner.invoke(
            main, ["wavefunction", "--zeta-re", "1.2", "--zeta-im", "0"]
        )
        assert result.exit_code == 2


class TestCoherentStateCommand:
    def test_su11_coefficients(self, runner):
        result = runner.invoke(
            main,
            ["coherent-state", "--algebra", "su11", "--k", "0.5", "--n", "0",
             "--zeta-re", "0.4", "--format", "json"],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert abs(payload["meta"]["norm_sq"] - 1.0) <= 1e-10
        c0 = payload["rows"][0]
        assert c0["re"] == pytest.approx(np.sqrt(1 - 0.16), rel=1e-12)

    def test_su2_coefficients(self, runner):
        result = runner.invoke(
            main,
            ["coherent-state", "--algebra", "su2", "--j", "1.5", "--mu", "-1.5",
             "--zeta-re", "0.3", "--zeta-im", "0.2", "--format", "csv"],
        )
        assert result.exit_code == 0, result.output
        rows, meta = parse_csv(result.output)
        assert len(rows) == 4  # 2j + 1
        assert abs(float(meta["norm_sq"]) - 1.0) <= 1e-10

    def test_bad_labels_exit_code(self, runner):
        result = runner.invoke(
            main, ["coherent-state", "--algebra", "su2", "--j", "1.0", "--mu", "0.3"]
        )
        assert result.exit_code == 2


class TestLimitsCommand:
    def test_coupled_osc_decay(self, runner):
        result = runner.invoke(
            main,
            ["limits", "--case", "coupled-osc", "--omega1", "1", "--omega2", "2",
             "--charge", "2", "--index", "1", "--scales", "1e4,1e5,1e6",
             "--format", "json"],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        errs = [r["rel_error"] for r in payload["rows"]]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 1e-5
        assert payload["meta"]["decay_exponent"] == pytest.approx(-1.0, abs=0.1)


class TestConfigPrecedence:
    def test_config_file_defaults(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"spectrum": {"nmax": 1, "mmax": 0}}))
        result = runner.invoke(
            main, ["--config", str(cfg), "spectrum", "--format", "json"]
        )
        assert result.exit_code == 0
        rows = json.loads(result.output)["rows"]
        assert {r["n_l"] for r in rows} == {0, 1}
        # CLI flag wins over the config value
        result = runner.invoke(
            main, ["--config", str(cfg), "spectrum", "--nmax", "0", "--format", "json"]
        )
        rows = json.loads(result.output)["rows"]
        assert {r["n_l"] for r in rows} == {0}
