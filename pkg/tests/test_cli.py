"""Command line contract: artifacts, exit codes, config precedence."""

import csv
import json
import xml.dom.minidom

import numpy as np
import pytest

from koopman_schur.cli import main
from koopman_schur.harness import generate_synthetic, load_snapshots, save_snapshots

ROTATION = "synth:rotation,angle=0.3"


def run(*argv):
    return main(list(argv))


class TestAnalyze:
    def test_writes_spectrum_and_metrics(self, tmp_path):
        rc = run("analyze", "--input", ROTATION, "--out", str(tmp_path))
        assert rc == 0
        with open(tmp_path / "eigenvalues.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert {r["method"] for r in rows} == {"ks_ssmd"}
        lam = np.array([complex(float(r["real"]), float(r["imag"])) for r in rows])
        assert min(abs(lam - np.exp(0.3j))) < 1e-8
        doc = json.loads((tmp_path / "metrics.json").read_text())
        assert doc["ks_ssmd"]["rank"] == 2
        assert doc["ks_ssmd"]["max_reconstruction_error"] < 1e-8
        cfg = json.loads((tmp_path / "effective_config.json").read_text())
        assert cfg["method"] == "ks_ssmd"

    def test_multiple_methods(self, tmp_path):
        rc = run(
            "analyze", "--input", ROTATION, "--method", "ks_ssmd,dmd",
            "--out", str(tmp_path),
        )
        assert rc == 0
        doc = json.loads((tmp_path / "metrics.json").read_text())
        assert set(doc) == {"ks_ssmd", "dmd"}

    def test_factors_written_on_request(self, tmp_path):
        rc = run("analyze", "--input", ROTATION, "--factors", "--out", str(tmp_path))
        assert rc == 0
        assert (tmp_path / "ks_ssmd_T.csv").exists()
        assert (tmp_path / "ks_ssmd_zeta_x.csv").exists()
        assert (tmp_path / "ks_ssmd_xi.csv").exists()

    def test_select_full_pair_gives_unit_weights(self, tmp_path):
        rc = run(
            "analyze", "--input", ROTATION, "--select", "0,1", "--out", str(tmp_path)
        )
        assert rc == 0
        doc = json.loads((tmp_path / "subset.json").read_text())
        assert doc["indices"] == [0, 1]
        coeff = np.array([complex(re, im) for re, im in doc["coefficients"]])
        np.testing.assert_allclose(coeff, 1.0, atol=1e-8)
        assert doc["residual_fro"] < 1e-8

    def test_select_splitting_a_pair_fails(self, tmp_path):
        rc = run(
            "analyze", "--input", ROTATION, "--select", "0", "--out", str(tmp_path)
        )
        assert rc == 1

    def test_select_needs_schur_method(self, tmp_path):
        rc = run(
            "analyze", "--input", ROTATION, "--method", "dmd", "--select", "0,1",
            "--out", str(tmp_path),
        )
        assert rc == 64


class TestStream:
    def test_artifacts_and_determinism(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            rc = run(
                "stream", "--input", "synth:stuart_landau_like",
                "--window", "20", "--horizon", "5", "--steps", "8",
                "--method", "ks_ssmd,dmd", "--out", str(out),
            )
            assert rc == 0
        for name in ("metrics.json", "metrics.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
        windows = json.loads((out_a / "metrics.json").read_text())
        assert [w["step"] for w in windows] == list(range(1, 9))

    def test_plots_are_valid_svg(self, tmp_path):
        rc = run(
            "stream", "--input", ROTATION, "--window", "10", "--horizon", "2",
            "--steps", "4", "--plots", "--out", str(tmp_path),
        )
        assert rc == 0
        for name in ("eigenvalues.svg", "errors.svg"):
            doc = xml.dom.minidom.parse(str(tmp_path / name))
            assert doc.documentElement.tagName == "svg"

    def test_insufficient_data_exits_1(self, tmp_path):
        rc = run(
            "stream", "--input", "synth:rotation,m=20", "--window", "30",
            "--steps", "5", "--out", str(tmp_path),
        )
        assert rc == 1

    def test_config_file_precedence(self, tmp_path):
        cfg_path = tmp_path / "run.json"
        cfg_path.write_text(json.dumps({"window": 12, "steps": 3, "horizon": 2}))
        rc = run(
            "stream", "--input", ROTATION, "--config", str(cfg_path),
            "--window", "15", "--out", str(tmp_path),
        )
        assert rc == 0
        effective = json.loads((tmp_path / "effective_config.json").read_text())
        # the flag beats the file, the file beats the default
        assert effective["window"] == 15
        assert effective["steps"] == 3

    def test_unknown_config_key_is_usage_error(self, tmp_path):
        cfg_path = tmp_path / "run.json"
        cfg_path.write_text(json.dumps({"widnow": 12}))
        rc = run(
            "stream", "--input", ROTATION, "--config", str(cfg_path),
            "--out", str(tmp_path),
        )
        assert rc == 64


class TestForecast:
    def test_linear_data_predicts_held_out_tail(self, tmp_path):
        rc = run(
            "forecast", "--input", "synth:linear_spectrum,eigenvalues=0.95:0.6,m=60",
            "--horizon", "10", "--out", str(tmp_path),
        )
        assert rc == 0
        doc = json.loads((tmp_path / "metrics.json").read_text())
        assert doc["max_relative_error"] < 1e-6
        pred = load_snapshots(str(tmp_path / "predictions.csv"), fmt="csv")
        assert pred.shape[1] == 10
        with open(tmp_path / "errors.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert [int(r["lead"]) for r in rows] == list(range(1, 11))

    def test_zero_horizon_writes_empty_predictions(self, tmp_path):
        rc = run(
            "forecast", "--input", ROTATION, "--horizon", "0", "--out", str(tmp_path)
        )
        assert rc == 0
        assert (tmp_path / "predictions.csv").read_text() == ""


class TestCompare:
    def test_runs_all_four_methods(self, tmp_path):
        rc = run(
            "compare", "--input", "synth:stuart_landau_like,m=120",
            "--kernel", "gaussian", "--sigma", "0.8", "--out", str(tmp_path),
        )
        assert rc == 0
        with open(tmp_path / "compare.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["method"] for r in rows] == ["dmd", "edmd", "ks_ssmd", "ks_essmd"]
        table = (tmp_path / "compare.txt").read_text()
        for method in ("dmd", "edmd", "ks_ssmd", "ks_essmd"):
            assert method in table


class TestSynth:
    def test_writes_csv_dataset(self, tmp_path):
        rc = run(
            "synth", "--input", "synth:rotation,angle=0.2,m=15", "--out", str(tmp_path)
        )
        assert rc == 0
        Z = load_snapshots(str(tmp_path / "data.csv"), fmt="csv")
        assert Z.shape == (2, 16)
        np.testing.assert_allclose(Z[:, 1], [np.cos(0.2), np.sin(0.2)], atol=1e-12)

    def test_writes_raw_dataset(self, tmp_path):
        rc = run(
            "synth", "--input", "synth:rotation,m=10", "--format", "raw",
            "--out", str(tmp_path),
        )
        assert rc == 0
        Z = load_snapshots(str(tmp_path / "data.raw"), fmt="raw_f64")
        assert Z.shape == (2, 11)

    def test_requires_synth_input(self, tmp_path):
        data = tmp_path / "d.csv"
        save_snapshots(generate_synthetic("rotation", {}, 10), str(data), fmt="csv")
        rc = run("synth", "--input", str(data), "--out", str(tmp_path))
        assert rc == 64


class TestFileInput:
    def test_analyze_reads_csv_file(self, tmp_path):
        data = tmp_path / "d.csv"
        save_snapshots(
            generate_synthetic("rotation", {"angle": 0.3}, 40), str(data), fmt="csv"
        )
        rc = run("analyze", "--input", str(data), "--out", str(tmp_path))
        assert rc == 0
        doc = json.loads((tmp_path / "metrics.json").read_text())
        assert doc["ks_ssmd"]["rank"] == 2

    def test_missing_file_exits_1(self, tmp_path):
        rc = run("analyze", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path))
        assert rc == 1


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ("analyze", "--input", ROTATION, "--kernel", "gaussian"),
            ("analyze", "--input", ROTATION, "--kernel", "linear", "--sigma", "2.0"),
            ("analyze", "--input", ROTATION, "--method", "arima"),
            ("analyze", "--input", ROTATION, "--kernel", "cubic"),
            ("stream", "--input", ROTATION, "--window", "one"),
            ("frobnicate",),
        ],
    )
    def test_exit_64(self, argv, tmp_path):
        assert run(*argv, "--out", str(tmp_path)) == 64

    def test_missing_input_is_usage_error(self, tmp_path):
        assert run("analyze", "--out", str(tmp_path)) == 64

    def test_unknown_synth_kind_is_data_error(self, tmp_path):
        # the kind lives inside the input spec, so it fails at load time
        assert run("analyze", "--input", "synth:unknown_kind", "--out", str(tmp_path)) == 1
