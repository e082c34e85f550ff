import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = os.path.join(PKG_ROOT, "src") + os.pathsep + env.get("PYTHONPATH", "")
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "puosc", *args],
                          capture_output=True, text=True, env=env)


class TestUsageErrors:
    def test_both_parameter_styles_rejected(self):
        r = run_cli("simulate", "--alpha", "1", "--omega1", "1", "--omega2", "1", "--B1", "1")
        assert r.returncode == 2

    def test_missing_parameters_rejected(self):
        r = run_cli("hierarchy", "--n", "3")
        assert r.returncode == 2

    def test_partial_pair_rejected(self):
        r = run_cli("hierarchy", "--n", "3", "--alpha", "5")
        assert r.returncode == 2

    def test_unknown_flag_rejected(self):
        r = run_cli("verify", "--omega1", "2", "--omega2", "1", "--frobnicate")
        assert r.returncode == 2

    def test_verify_csv_rejected(self):
        r = run_cli("verify", "--omega1", "2", "--omega2", "1", "--format", "csv")
        assert r.returncode == 2

    def test_bad_env_tolerance_rejected(self):
        r = run_cli("hierarchy", "--n", "2", "--alpha", "5", "--beta", "4",
                    env_extra={"PU_TOL": "not-a-number"})
        assert r.returncode == 2


class TestDomainErrors:
    def test_beta_zero_hierarchy(self):
        r = run_cli("hierarchy", "--n", "3", "--alpha", "5", "--beta", "0")
        assert r.returncode == 1
        assert "beta" in r.stderr

    def test_transform_complex_branch(self):
        r = run_cli("transform", "--kind", "Ta2+", "--omega1", "2", "--omega2", "1",
                    "--ax", "1", "--ay", "1", "--g", "5")
        assert r.returncode == 1


class TestHierarchyCommand:
    def test_h3_row(self):
        r = run_cli("hierarchy", "--n", "3", "--alpha", "5", "--beta", "4")
        assert r.returncode == 0
        rows = list(csv.DictReader(r.stdout.splitlines()))
        h3 = rows[2]
        assert float(h3["c_h1"]) == pytest.approx(-4.0, abs=1e-10)
        assert float(h3["c_h2"]) == pytest.approx(-5.0, abs=1e-10)
        assert float(h3["p_n"]) == -21.0

    def test_json_format(self):
        r = run_cli("hierarchy", "--n", "2", "--alpha", "5", "--beta", "4",
                    "--format", "json")
        data = json.loads(r.stdout)
        assert data["charges"][0]["c_h1"] == pytest.approx(1.0, abs=1e-12)
        assert data["charges"][1]["c_h2"] == pytest.approx(1.0, abs=1e-12)


class TestTransformCommand:
    def test_tb1_report(self):
        r = run_cli("transform", "--kind", "Tb1", "--omega1", "2", "--omega2", "1",
                    "--ax", "1", "--bx", "0", "--g", "1")
        assert r.returncode == 0
        data = json.loads(r.stdout)
        assert data["pullback"]["c_h1"] == pytest.approx(-5.0, abs=1e-9)
        assert data["pullback"]["c_h2"] == pytest.approx(-1.0, abs=1e-9)
        assert data["canonical"] is True
        table = np.array(data["bracket_table"])
        want = np.zeros((4, 4))
        want[0, 2] = want[1, 3] = 1.0
        want[2, 0] = want[3, 1] = -1.0
        assert np.max(np.abs(table - want)) <= 1e-10

    def test_ta1_reports_singular_tensor(self):
        r = run_cli("transform", "--kind", "Ta1+", "--omega1", "2", "--omega2", "1",
                    "--ax", "1", "--ay", "1", "--g", "0.2")
        assert r.returncode == 0
        data = json.loads(r.stdout)
        assert data["flow_preserving_tensor"] is None
        assert data["canonical"] is False
        assert "tensor_error" in data


class TestFlowCommand:
    def test_curve_shape_and_header(self):
        r = run_cli("flow", "--omega1", "2", "--omega2", "1", "--generator", "X2",
                    "--s", "1", "--A1", "1", "--steps", "10", "--t-end", "5")
        assert r.returncode == 0
        lines = r.stdout.strip().splitlines()
        assert lines[0] == "t,q,qd,qdd,qddd"
        assert len(lines) == 12
        # X2 flow rescales the classical solution by e^(s/2)
        import math
        row = lines[1].split(",")
        assert float(row[1]) == pytest.approx(0.0, abs=1e-12)
        assert float(row[2]) == pytest.approx(2.0 * math.exp(0.5), rel=1e-12)


class TestSimulateCommand:
    def test_degenerate_growth_visible_in_csv(self, tmp_path):
        out = tmp_path / "traj.csv"
        r = run_cli("simulate", "--omega1", "1", "--omega2", "1", "--B1", "1",
                    "--h", "1e-3", "--t-end", "20", "--out", str(out))
        assert r.returncode == 0
        rows = list(csv.DictReader(out.open()))
        early = max(abs(float(row["q"])) for row in rows if float(row["t"]) <= 2.0)
        late = max(abs(float(row["q"])) for row in rows if float(row["t"]) >= 18.0)
        assert late > early

    def test_interaction_column(self):
        r = run_cli("simulate", "--omega1", "2", "--omega2", "1", "--A1", "0.3",
                    "--h", "1e-2", "--t-end", "1", "--potential", "quartic:lam=0.25")
        lines = r.stdout.strip().splitlines()
        assert lines[0].split(",")[-1] == "Hint"
        first = dict(zip(lines[0].split(","), lines[1].split(",")))
        last = dict(zip(lines[0].split(","), lines[-1].split(",")))
        assert float(first["Hint"]) == pytest.approx(float(last["Hint"]), abs=1e-8)

    def test_csv_round_trip_exact(self, tmp_path):
        out = tmp_path / "traj.csv"
        r = run_cli("simulate", "--omega1", "2", "--omega2", "1", "--A2", "1",
                    "--h", "1e-2", "--t-end", "1", "--out", str(out))
        assert r.returncode == 0
        text = out.read_text()
        lines = text.strip().splitlines()
        rebuilt = [lines[0]]
        for line in lines[1:]:
            rebuilt.append(",".join(format(float(tok), ".17g") for tok in line.split(",")))
        assert "\n".join(rebuilt) + "\n" == text


class TestDiscoverCommand:
    def test_pairs_and_residuals(self):
        r = run_cli("discover", "--alpha", "5", "--beta", "4")
        assert r.returncode == 0
        data = json.loads(r.stdout)
        assert data["kernel_dimension"] == 2
        assert len(data["pairs"]) == 2
        assert all(pair["residual"] <= 1e-10 for pair in data["pairs"])
        for pair in data["pairs"]:
            j = np.array(pair["j"])
            assert np.max(np.abs(j + j.T)) <= 1e-12


class TestVerifyCommand:
    def test_deterministic_and_green(self, tmp_path):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        r1 = run_cli("verify", "--omega1", "2", "--omega2", "1", "--seed", "42",
                     "--out", str(out1))
        r2 = run_cli("verify", "--omega1", "2", "--omega2", "1", "--seed", "42",
                     "--out", str(out2))
        assert r1.returncode == 0 and r2.returncode == 0
        assert out1.read_bytes() == out2.read_bytes()
        report = json.loads(out1.read_text())
        assert report["pass"] is True
        assert report["seed"] == 42
        assert report["params"]["alpha"] == 5.0
        for check in report["checks"]:
            assert set(check) == {"id", "anchor", "pass", "residual", "samples"}
            assert check["pass"] is True
        assert report["resolved"]

    def test_reports_to_stdout_without_out(self):
        r = run_cli("verify", "--omega1", "2", "--omega2", "1", "--seed", "7")
        assert r.returncode == 0
        assert json.loads(r.stdout)["pass"] is True
