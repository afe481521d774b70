import csv
import importlib.resources
import json

import pytest

from quantromon.cli import load_config, normalize_config, run
from quantromon.errors import ConfigError

CONFIG_DIR = importlib.resources.files("quantromon") / "configs"
SAMPLE_A = str(CONFIG_DIR / "sample_a.json")
SAMPLE_B = str(CONFIG_DIR / "sample_b.json")
SAMPLE_C = str(CONFIG_DIR / "sample_c.json")
REFERENCE = str(CONFIG_DIR / "reference_device.json")


def _read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def _write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestConfigParsing:
    def test_bundled_configs_load(self):
        for path in (SAMPLE_A, SAMPLE_B, SAMPLE_C, REFERENCE):
            cfg = load_config(path)
            assert cfg.circuit is not None

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match="mystery"):
            normalize_config({"mystery": {}})

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="circuit.l_x"):
            normalize_config({"circuit": {"l_x": 1.0}})

    def test_normalize_idempotent(self):
        raw = json.loads(open(SAMPLE_A).read())
        once = normalize_config(raw)
        assert normalize_config(once) == once

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            load_config("/nonexistent/config.json")

    def test_non_numeric_value_rejected(self, tmp_path):
        path = _write_config(tmp_path, {"circuit": {
            "l_j": "big", "c_j": 1e-15, "l_r": 1e-9, "c_r": 1e-13, "b": 0.4}})
        with pytest.raises(ConfigError, match="l_j"):
            load_config(path)


class TestExitCodes:
    def test_success(self, tmp_path, capsys):
        assert run(["energies", "--config", REFERENCE]) == 0
        assert "e_j" in capsys.readouterr().out

    def test_validation_error_names_parameter(self, tmp_path, capsys):
        path = _write_config(tmp_path, {"circuit": {
            "l_j": 8.2e-9, "c_j": 56.88e-15, "l_r": 0.546e-9,
            "c_r": 781.8e-15, "b": 1.2}})
        assert run(["energies", "--config", path]) == 1
        assert "b" in capsys.readouterr().err

    def test_missing_config_flag(self, capsys):
        assert run(["energies"]) == 1

    def test_missing_section(self, tmp_path, capsys):
        path = _write_config(tmp_path, {"coherence": {"q_diel": 1e6, "kappa": 1e6}})
        assert run(["spectrum", "--config", path]) == 1
        assert "circuit" in capsys.readouterr().err

    def test_malformed_trunc(self, capsys):
        assert run(["spectrum", "--config", REFERENCE, "--trunc", "abc"]) == 1

    def test_missing_shot_file(self, capsys):
        assert run(["readout-fit", "--shots0", "/nope0.csv", "--shots1", "/nope1.csv"]) == 1

    def test_numerical_failure_exit_code(self, tmp_path, capsys):
        # junction inductance tuned so the dressed modes are degenerate and
        # the asymmetric coupling hybridizes them: labeling must fail
        path = _write_config(tmp_path, {"circuit": {
            "l_j": 7.394e-9, "c_j": 56.88e-15, "l_r": 0.546e-9,
            "c_r": 781.8e-15, "b": 0.405, "d_j": 0.3}})
        assert run(["spectrum", "--config", path]) == 2
        assert "failure" in capsys.readouterr().err


class TestSpectrumCommand:
    def test_reference_device_agreement(self, tmp_path):
        out = tmp_path / "spec.csv"
        assert run(["spectrum", "--config", REFERENCE, "--out", str(out)]) == 0
        rows = {r["quantity"]: r for r in _read_csv(out)}
        assert float(rows["two_chi"]["rel_delta"]) < 0.10
        assert float(rows["omega_q_t"]["rel_delta"]) < 0.01

    def test_json_format(self, tmp_path):
        out = tmp_path / "spec.json"
        assert run(["spectrum", "--config", REFERENCE, "--format", "json",
                    "--out", str(out)]) == 0
        rows = json.loads(out.read_text())
        assert {r["quantity"] for r in rows} >= {"two_chi", "alpha_q"}


class TestSweepCommands:
    def test_chi_sweep_rows(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run(["chi-sweep", "--config", SAMPLE_A, "--out", str(out)]) == 0
        rows = _read_csv(out)
        assert len(rows) == 10
        shifts = [float(r["two_chi_total"]) for r in rows]
        assert all(hi > lo for hi, lo in zip(shifts, shifts[1:]))

    def test_t1_model_rows(self, tmp_path):
        out = tmp_path / "t1.csv"
        assert run(["t1-model", "--config", SAMPLE_A, "--out", str(out)]) == 0
        rows = _read_csv(out)
        assert len(rows) == 10
        for row in rows:
            assert float(row["t1_model"]) > 0.0
            assert float(row["t1_transmon_purcell"]) > 0.0
            assert row["error"] == ""

    def test_sample_b_sweep(self, tmp_path):
        out = tmp_path / "b.csv"
        assert run(["chi-sweep", "--config", SAMPLE_B, "--out", str(out)]) == 0
        rows = _read_csv(out)
        asymmetries = [float(r["d_j"]) for r in rows]
        assert asymmetries[0] == pytest.approx(-0.30, rel=1e-9)
        assert abs(asymmetries[5]) < 0.02  # minimum-asymmetry operating point


class TestPhaseCommand:
    def test_value(self, tmp_path):
        out = tmp_path / "phase.csv"
        assert run(["phase", "--config", SAMPLE_C, "--out", str(out)]) == 0
        row = _read_csv(out)[0]
        assert float(row["separation_deg"]) == pytest.approx(232.32, abs=0.01)


class TestReadoutCommands:
    def test_sim_writes_shots_and_report(self, tmp_path):
        out = tmp_path / "readout" / "report.csv"
        assert run(["readout-sim", "--config", SAMPLE_C, "--out", str(out),
                    "--shots", "5000", "--seed", "5"]) == 0
        rows = _read_csv(out)
        assert len(rows) == 7  # tau_list from the bundled config
        assert (tmp_path / "readout" / "report_shots0.csv").exists()
        assert (tmp_path / "readout" / "report_shots1.csv").exists()

    def test_fit_round_trip_matches_sim_report(self, tmp_path):
        cfg = json.loads(open(SAMPLE_C).read())
        del cfg["readout_sim"]["tau_list"]  # single-point report
        path = _write_config(tmp_path, cfg)
        out = tmp_path / "report.csv"
        assert run(["readout-sim", "--config", path, "--out", str(out),
                    "--shots", "20000", "--seed", "11"]) == 0
        sim_row = _read_csv(out)[0]

        out2 = tmp_path / "refit.csv"
        assert run(["readout-fit",
                    "--shots0", str(tmp_path / "report_shots0.csv"),
                    "--shots1", str(tmp_path / "report_shots1.csv"),
                    "--out", str(out2)]) == 0
        fit_row = _read_csv(out2)[0]
        for key in ("mu0", "mu1", "sigma0", "sigma1", "a0", "a1",
                    "threshold", "p01", "p10", "fidelity",
                    "eps_id", "eps_01", "eps_10"):
            assert fit_row[key] == sim_row[key]


class TestDeterminism:
    def test_chi_sweep_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run(["chi-sweep", "--config", SAMPLE_A, "--out", str(out1)])
        run(["chi-sweep", "--config", SAMPLE_A, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_readout_sim_byte_identical(self, tmp_path):
        outs = []
        for name in ("r1", "r2"):
            out = tmp_path / name / "rep.csv"
            run(["readout-sim", "--config", SAMPLE_C, "--out", str(out),
                 "--shots", "3000", "--seed", "42"])
            outs.append(out)
        assert outs[0].read_bytes() == outs[1].read_bytes()
        assert (outs[0].parent / "rep_shots0.csv").read_bytes() == \
            (outs[1].parent / "rep_shots0.csv").read_bytes()
