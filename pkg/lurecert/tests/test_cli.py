"""
End-to-end tests for the lurecert command line.
"""

import json
from pathlib import Path

import pytest

from lurecert.commands.base import Command, RunConfig
from lurecert.commands.runner import validate_inputs
from lurecert.main import main
from lurecert.schemas import CertificateReport, WitnessReport, validate_report, validate_result


def _write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def files(tmp_path):
    """System, sector, nonlinearity and input files for the small reference loops"""
    return {
        "half": _write(tmp_path / "half.json", {"D": [[0.5]]}),
        "double": _write(tmp_path / "double.json", {"D": [[2.0]]}),
        "gradient": _write(
            tmp_path / "gradient.json",
            {"A": [[1.0]], "B": [[-2.0 / 11.0]], "C": [[1.0]], "D": [[0.0]]},
        ),
        "ball": _write(tmp_path / "ball.json", {"M": [[1.0, 0.0], [0.0, -1.0]]}),
        "small_gain": _write(
            tmp_path / "small_gain.json",
            {"preset": "small_gain", "params": {"gamma1": 0.5, "gamma2": 0.5}},
        ),
        "asymmetric": _write(tmp_path / "asymmetric.json", {"M": [[1.0, 2.0], [0.0, -1.0]]}),
        "unit_gain": _write(
            tmp_path / "unit_gain.json", {"kind": "static_map", "map": "gain", "gain": 1.0}
        ),
        "saturation": _write(
            tmp_path / "saturation.json", {"kind": "static_map", "map": "saturation", "level": 1.0}
        ),
        "impulse": _write(tmp_path / "impulse.json", {"u1": [1.0, 0.0, 0.0, 0.0]}),
        "x0": _write(tmp_path / "x0.json", {"x0": [[1.0], [-2.0]]}),
    }


def _run(tmp_path, *argv, name="report.json"):
    out = tmp_path / name
    code = main(["--output", str(out), *argv])
    report = json.loads(out.read_text())
    assert validate_report(report)
    assert report["exit_code"] == code
    return code, report


class TestPresetsCommand:
    """Test the preset listing"""

    def test_presets(self, tmp_path):
        """Test that all four rows are listed"""
        code, report = _run(tmp_path, "presets")
        assert code == 0
        assert report["tool"] == "lurecert"
        assert report["command"] == "presets"
        assert len(report["result"]["presets"]) == 4


class TestCertifyCommand:
    """Test certify, rate and gamma"""

    def test_certified(self, tmp_path, files):
        """Test that the half-gain loop certifies"""
        code, report = _run(
            tmp_path, "certify", "--system", files["half"], "--sector", files["ball"], "--horizon", "4"
        )
        assert code == 0
        result = report["result"]
        assert result["certified"] is True
        assert result["tau"] == pytest.approx(5.0 / 3.0, rel=2e-3)
        assert result["e_gain"] > result["gamma"]
        assert set(report["inputs"]) == {"system", "sector"}
        assert all(len(h) == 64 for h in report["inputs"].values())
        result.pop("certified")
        result.pop("e_gain")
        assert validate_result(result, CertificateReport)

    def test_not_certified(self, tmp_path, files):
        """Test that the double-gain loop exits with 1"""
        code, report = _run(
            tmp_path, "certify", "--system", files["double"], "--sector", files["ball"], "--horizon", "4"
        )
        assert code == 1
        assert report["result"]["certified"] is False

    def test_frequency_screen(self, tmp_path, files):
        """Test the optional frequency-domain screen"""
        code, report = _run(
            tmp_path,
            "certify",
            "--system",
            files["half"],
            "--sector",
            files["ball"],
            "--horizon",
            "4",
            "--frequency",
            "--grid",
            "16",
        )
        assert code == 0
        assert report["result"]["frequency_screen"]["passed"] is True

    def test_byte_identical(self, tmp_path, files):
        """Test that repeating a run reproduces the report exactly"""
        argv = ["certify", "--system", files["half"], "--sector", files["ball"], "--horizon", "4"]
        _run(tmp_path, *argv, name="a.json")
        _run(tmp_path, *argv, name="b.json")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_rate(self, tmp_path, files):
        """Test that a static loop is certified at the bottom of the range"""
        code, report = _run(
            tmp_path,
            "rate",
            "--system",
            files["half"],
            "--sector",
            files["ball"],
            "--horizon",
            "4",
            "--rho-lo",
            "0.5",
        )
        assert code == 0
        assert report["result"]["rho_star"] == pytest.approx(0.5)

    def test_gamma(self, tmp_path, files):
        """Test the closed-form bound from a preset"""
        code, report = _run(tmp_path, "gamma", "--sector", files["small_gain"])
        assert code == 0
        result = report["result"]
        assert result["compatible"] is True
        assert result["eta"] == pytest.approx(1.5)
        assert result["gamma"] > 0.0

    def test_gamma_needs_N(self, tmp_path, files):
        """Test that an explicit M alone cannot give a bound"""
        code, report = _run(tmp_path, "gamma", "--sector", files["ball"])
        assert code == 2
        assert report["result"]["error"] == "CompatibilityError"


class TestViolateCommand:
    """Test counterexample synthesis from the command line"""

    def test_witness_written(self, tmp_path, files):
        """Test that a violation exits with 1 and writes the witness next to the report"""
        code, report = _run(
            tmp_path,
            "violate",
            "--system",
            files["double"],
            "--sector",
            files["ball"],
            "--gamma",
            "10",
            "--horizon",
            "4",
        )
        assert code == 1
        assert report["result"]["violation"] is True
        witness_file = tmp_path / "report.witness.json"
        assert report["result"]["witness_file"] == str(witness_file)
        witness = json.loads(witness_file.read_text())
        assert validate_result(witness, WitnessReport)
        assert witness["ratio"] > 10.0

    def test_no_violation(self, tmp_path, files):
        """Test that a loop with gain well below the target has no witness"""
        code, report = _run(
            tmp_path,
            "violate",
            "--system",
            files["half"],
            "--sector",
            files["ball"],
            "--gamma",
            "10",
            "--horizon",
            "2",
        )
        assert code == 0
        assert report["result"]["violation"] is False


class TestSimulateCommand:
    """Test simulate and decay"""

    def test_simulate(self, tmp_path, files):
        """Test the run summary of a saturated loop"""
        code, report = _run(
            tmp_path,
            "simulate",
            "--system",
            files["gradient"],
            "--nonlinearity",
            files["saturation"],
            "--inputs",
            files["impulse"],
        )
        assert code == 0
        runs = report["result"]["runs"]
        assert len(runs) == 1
        assert runs[0]["horizon"] == 3
        assert runs[0]["residual"] <= 1e-10

    def test_simulate_csv(self, tmp_path, files):
        """Test that CSV output writes one trajectory file per input pair"""
        code, report = _run(
            tmp_path,
            "--format",
            "csv",
            "simulate",
            "--system",
            files["gradient"],
            "--nonlinearity",
            files["unit_gain"],
            "--inputs",
            files["impulse"],
            name="sim.json",
        )
        assert code == 0
        lines = (tmp_path / "sim-0.csv").read_text().splitlines()
        assert lines[0].startswith("k,")
        assert len(lines) == 5

    def test_decay(self, tmp_path, files):
        """Test the 9/11 contraction of the unit-gain gradient loop"""
        argv = [
            "decay",
            "--system",
            files["gradient"],
            "--nonlinearity",
            files["unit_gain"],
            "--inputs",
            files["x0"],
            "--steps",
            "20",
        ]
        code, report = _run(tmp_path, *argv, "--rho", "0.82", name="pass.json")
        assert code == 0
        assert report["result"]["pass"] is True

        code, report = _run(tmp_path, *argv, "--rho", "0.7", name="fail.json")
        assert code == 1
        assert report["result"]["pass"] is False


class TestValidateCommand:
    """Test diagnostics and usage errors"""

    def test_valid(self, tmp_path, files):
        """Test that good files give no diagnostics"""
        code, report = _run(
            tmp_path, "validate", "--system", files["half"], "--sector", files["ball"]
        )
        assert code == 0
        assert report["result"] == {"valid": True, "diagnostics": []}

    def test_all_diagnostics(self, tmp_path, files):
        """Test that every problem is listed, not just the first"""
        code, report = _run(
            tmp_path,
            "validate",
            "--system",
            files["half"],
            "--sector",
            files["asymmetric"],
            "--inputs",
            str(tmp_path / "missing.json"),
            "--rho",
            "1.5",
        )
        assert code == 2
        diags = report["result"]["diagnostics"]
        assert any(d.startswith("--rho") for d in diags)
        assert any(d.startswith("sector (") and "not symmetric" in d for d in diags)
        assert any(d.startswith("inputs: file not found") for d in diags)

    def test_dimension_mismatch(self, tmp_path, files):
        """Test that input signals must match G"""
        pair = _write(tmp_path / "pair.json", {"u1": [[1.0, 0.0], [0.0, 1.0]]})
        code, report = _run(tmp_path, "validate", "--system", files["half"], "--inputs", pair)
        assert code == 2
        assert any(d.startswith("inputs.pairs.0") for d in report["result"]["diagnostics"])

    def test_missing_required_file(self, tmp_path, files):
        """Test that a command refuses to run without its inputs"""
        code, report = _run(tmp_path, "certify", "--system", files["half"])
        assert code == 2
        assert "--sector: required for certify" in report["result"]["diagnostics"]

    def test_usage_errors(self):
        """Test that argparse failures return 2"""
        assert main(["frobnicate"]) == 2
        assert main(["--format", "xml", "presets"]) == 2

    def test_validate_inputs_directly(self, files):
        """Test that validate_inputs collects range and missing-file diagnostics"""
        config = RunConfig(command=Command.CERTIFY, system=Path(files["half"]), rho=2.0)
        diags = validate_inputs(config)
        assert "--sector: required for certify" in diags
        assert any(d.startswith("--rho: must lie in (0, 1]") for d in diags)

        config = RunConfig(
            command=Command.CERTIFY, system=Path(files["half"]), sector=Path(files["ball"])
        )
        assert validate_inputs(config) == []
