"""CLI scenarios: config handling, output formats, determinism, fringe fit."""

import json
import math

import numpy as np
import pytest

from spinphase import detector_probabilities, nonideal_phase, nonideal_visibility
from spinphase.cli import fit_fringe, main
from spinphase.errors import InsufficientSamples
from spinphase.interferometry import circular_distance

NATURAL_UNITS = {"hbar": 1.0, "c": 1.0, "eps0": 1.0, "mu": 1.0, "Gamma": 2.0, "m": 1.0}


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def read_csv(path):
    lines = path.read_text().split("\n")
    assert lines[-1] == ""
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:-1]]
    return header, rows


class TestFitFringe:
    def test_noiseless_round_trip(self):
        phi, nu = 0.6154797086703873, 0.8660254037844387
        samples = []
        for j in range(64):
            chi = 2.0 * math.pi * j / 64
            p1, _ = detector_probabilities(phi, nu, chi)
            samples.append((chi, p1))
        fit_phi, fit_nu = fit_fringe(samples)
        assert circular_distance(fit_phi, phi) < 1e-10
        assert fit_nu == pytest.approx(nu, abs=1e-10)

    def test_flat_scan_has_undefined_phase(self):
        samples = [(2.0 * math.pi * j / 16, 0.5) for j in range(16)]
        fit_phi, fit_nu = fit_fringe(samples)
        assert fit_phi is None
        assert fit_nu == pytest.approx(0.0, abs=1e-12)

    def test_pi_phase_recovered_on_circle(self):
        samples = []
        for j in range(32):
            chi = 2.0 * math.pi * j / 32
            p1, _ = detector_probabilities(math.pi, 1.0, chi)
            samples.append((chi, p1))
        fit_phi, fit_nu = fit_fringe(samples)
        assert circular_distance(fit_phi, math.pi) < 1e-10
        assert fit_nu == pytest.approx(1.0, abs=1e-10)

    def test_too_few_samples(self):
        with pytest.raises(InsufficientSamples):
            fit_fringe([(0.0, 0.6), (1.0, 0.4)])

    def test_narrow_span(self):
        with pytest.raises(InsufficientSamples):
            fit_fringe([(0.0, 0.6), (0.5, 0.5), (1.0, 0.4)])


class TestInterfereMode:
    def test_ideal_case_row(self, tmp_path):
        out = tmp_path / "row.csv"
        cfg = write_config(
            tmp_path, "cfg.json", {"mode": "interfere", "theta": 0.0, "phi_d": 1.3, "out": str(out)}
        )
        assert main(["--config", str(cfg)]) == 0
        header, rows = read_csv(out)
        assert header == ["theta", "phi_D", "phi", "visibility", "gamma_dyn", "gamma_geo", "omega_gc"]
        assert float(rows[0][2]) == pytest.approx(1.3, abs=1e-12)
        assert float(rows[0][3]) == pytest.approx(1.0, abs=1e-12)

    def test_flags_override_file(self, tmp_path):
        out = tmp_path / "row.csv"
        cfg = write_config(
            tmp_path, "cfg.json", {"mode": "interfere", "theta": 0.0, "phi_d": 0.1, "out": str(out)}
        )
        assert main(["--config", str(cfg), "--phi-d", "0.7"]) == 0
        _, rows = read_csv(out)
        assert float(rows[0][1]) == pytest.approx(0.7)

    def test_degrees_flag(self, tmp_path):
        out = tmp_path / "row.csv"
        assert (
            main(
                [
                    "--mode",
                    "interfere",
                    "--theta",
                    "0",
                    "--phi-d",
                    "45",
                    "--degrees",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        _, rows = read_csv(out)
        assert float(rows[0][1]) == pytest.approx(math.pi / 4, abs=1e-12)

    def test_undefined_phase_serializes_nan(self, tmp_path):
        out = tmp_path / "row.csv"
        assert (
            main(
                [
                    "--mode",
                    "interfere",
                    "--theta",
                    str(math.pi / 2),
                    "--phi-d",
                    str(math.pi / 2),
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        _, rows = read_csv(out)
        assert rows[0][2] == "NaN"
        assert rows[0][5] == "NaN"
        assert rows[0][6] == "NaN"

    def test_json_null_for_undefined(self, tmp_path):
        out = tmp_path / "row.json"
        assert (
            main(
                [
                    "--mode",
                    "interfere",
                    "--theta",
                    str(math.pi / 2),
                    "--phi-d",
                    str(math.pi / 2),
                    "--format",
                    "json",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        payload = json.loads(out.read_text())
        assert payload["rows"][0][2] is None


class TestSweepMode:
    def test_rows_match_library_values(self, tmp_path):
        out = tmp_path / "sweep.csv"
        cfg = write_config(
            tmp_path,
            "cfg.json",
            {
                "mode": "sweep",
                "grid_theta": [0.0, math.pi / 2, 3],
                "grid_phid": [math.pi / 4, math.pi / 4, 1],
                "out": str(out),
            },
        )
        assert main(["--config", str(cfg)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 3
        for row in rows:
            theta, phi_d = float(row[0]), float(row[1])
            assert float(row[2]) == pytest.approx(nonideal_phase(theta, phi_d), abs=1e-12)
            assert float(row[3]) == pytest.approx(nonideal_visibility(theta, phi_d), abs=1e-12)

    def test_grid_flags(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert (
            main(
                [
                    "--mode",
                    "sweep",
                    "--grid-theta",
                    "0:1.5:4",
                    "--grid-phid",
                    "0.2:0.8:2",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        _, rows = read_csv(out)
        assert len(rows) == 8

    def test_byte_identical_reruns(self, tmp_path):
        args = ["--mode", "sweep", "--grid-theta", "0:3.1:5", "--grid-phid=-3:3:7"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestChiScanMode:
    def test_fit_recovers_ground_truth(self, tmp_path):
        out = tmp_path / "scan.json"
        cfg = write_config(
            tmp_path,
            "cfg.json",
            {
                "mode": "chi-scan",
                "phi": 0.4,
                "visibility": 0.5,
                "chi_samples": 64,
                "format": "json",
                "out": str(out),
            },
        )
        assert main(["--config", str(cfg)]) == 0
        payload = json.loads(out.read_text())
        assert payload["fit"]["visibility"] == pytest.approx(0.5, abs=1e-6)
        assert payload["fit"]["phi"] == pytest.approx(0.4, abs=1e-6)
        assert len(payload["rows"]) == 64

    def test_scan_from_tilt_configuration(self, tmp_path):
        out = tmp_path / "scan.json"
        theta, phi_d = math.pi / 4, math.pi / 4
        cfg = write_config(
            tmp_path,
            "cfg.json",
            {
                "mode": "chi-scan",
                "theta": theta,
                "phi_d": phi_d,
                "format": "json",
                "out": str(out),
            },
        )
        assert main(["--config", str(cfg)]) == 0
        payload = json.loads(out.read_text())
        assert payload["fit"]["phi"] == pytest.approx(nonideal_phase(theta, phi_d), abs=1e-9)
        assert payload["fit"]["visibility"] == pytest.approx(
            nonideal_visibility(theta, phi_d), abs=1e-9
        )

    def test_csv_prints_fit_summary(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        assert (
            main(
                [
                    "--mode",
                    "chi-scan",
                    "--theta",
                    "0.5",
                    "--phi-d",
                    "0.3",
                    "--chi-samples",
                    "32",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        captured = capsys.readouterr()
        assert captured.out.startswith("fit: phi=")
        header, rows = read_csv(out)
        assert header == ["chi", "P1", "P2"]
        assert len(rows) == 32
        for row in rows:
            assert float(row[1]) + float(row[2]) == 1.0


class TestPrecessionModes:
    def field_payload(self):
        return {
            "charges": [],
            "pulse": {"shape": "rectangular", "B0": 1.0, "t_on": 0.0, "t_off": 1.0},
            "units": NATURAL_UNITS,
        }

    def test_sab_quantum_matches_classical_columns(self, tmp_path):
        base = {
            "field": self.field_payload(),
            "theta": math.pi / 3,
            "t_max": 1.0,
            "n_t": 5,
        }
        out_c = tmp_path / "c.csv"
        out_q = tmp_path / "q.csv"
        cfg_c = write_config(tmp_path, "c.json", {**base, "mode": "sab-classical", "out": str(out_c)})
        cfg_q = write_config(tmp_path, "q.json", {**base, "mode": "sab-quantum", "out": str(out_q)})
        assert main(["--config", str(cfg_c)]) == 0
        assert main(["--config", str(cfg_q)]) == 0
        _, rows_c = read_csv(out_c)
        _, rows_q = read_csv(out_q)
        # Gamma = 2 mu / hbar in these units, so the series coincide
        for rc, rq in zip(rows_c, rows_q):
            assert float(rc[1]) == pytest.approx(float(rq[1]), abs=1e-12)
            for k in (2, 3, 4):
                assert float(rc[k]) == pytest.approx(float(rq[k]), abs=1e-8)
        # final precession angle: gamma = -2 * integral B = -2
        assert float(rows_q[-1][1]) == pytest.approx(-2.0, abs=1e-12)

    def test_ac_quantum_loop(self, tmp_path):
        ang = np.linspace(0.0, 2.0 * math.pi, 65)
        verts = [[math.cos(a), math.sin(a)] for a in ang[:-1]] + [[1.0, 0.0]]
        out = tmp_path / "loop.csv"
        cfg = write_config(
            tmp_path,
            "cfg.json",
            {
                "mode": "ac-quantum",
                "field": {"charges": [{"x": 0.0, "y": 0.0, "lambda": 1.0}], "units": NATURAL_UNITS},
                "path": {"vertices": verts, "closed": True},
                "theta": math.pi / 4,
                "n_sub": 64,
                "out": str(out),
            },
        )
        assert main(["--config", str(cfg)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 65
        assert float(rows[-1][3]) == pytest.approx(-2.0, abs=1e-6)

    def test_nondispersive_mode(self, tmp_path):
        out = tmp_path / "sweep.csv"
        cfg = write_config(
            tmp_path,
            "cfg.json",
            {
                "mode": "nondispersive",
                "field": self.field_payload(),
                "packet": {"x0": 0.0, "sigma0": 0.2},
                "region": {"x_min": -50.0, "x_max": 50.0},
                "velocities": [0.0, 1.0, 2.0, 400.0],
                "out": str(out),
            },
        )
        assert main(["--config", str(cfg)]) == 0
        header, rows = read_csv(out)
        assert header == ["velocity", "contained", "gamma", "valid"]
        assert [row[3] for row in rows] == ["true", "true", "true", "false"]
        gammas = {row[2] for row in rows}
        assert len(gammas) == 1


class TestErrors:
    def test_missing_key_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "cfg.json", {"mode": "interfere", "out": str(tmp_path / "x.csv")})
        assert main(["--config", str(cfg)]) == 2
        assert "'theta'" in capsys.readouterr().err

    def test_unknown_key_named(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "cfg.json", {"mode": "interfere", "bogus": 1})
        assert main(["--config", str(cfg)]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_missing_out_exits_2(self, capsys):
        assert main(["--mode", "interfere", "--theta", "0", "--phi-d", "1"]) == 2
        assert "'out'" in capsys.readouterr().err

    def test_singular_path_exits_3(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            "cfg.json",
            {
                "mode": "ac-quantum",
                "field": {"charges": [{"x": 0.0, "y": 0.0, "lambda": 1.0}], "units": NATURAL_UNITS},
                "path": {"vertices": [[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]},
                "theta": 0.5,
                "out": str(tmp_path / "x.csv"),
            },
        )
        assert main(["--config", str(cfg)]) == 3
        assert "segment" in capsys.readouterr().err

    def test_bad_mode_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, "cfg.json", {"mode": "frobnicate"})
        assert main(["--config", str(cfg)]) == 2
