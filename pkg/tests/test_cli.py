import json
import math
from importlib import resources

import jsonschema
import pytest

from coupled_entropy.cli import EXIT_ANALYSIS, EXIT_CONFIG, EXIT_OK, main, normalize_config, run_analysis
from coupled_entropy.errors import ConfigError

SCHEMA = json.loads(resources.files("coupled_entropy").joinpath("data/report.schema.json").read_text())


def run_cli(tmp_path, config, *extra, name="report.json"):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps(config))
    out = tmp_path / name
    code = main([extra[0] if extra else "analyze", "--config", str(cfg), "--out", str(out), *extra[1:]])
    return code, json.loads(out.read_text()) if out.exists() else None


def strip_timings(report):
    r = dict(report)
    r.pop("timings")
    return r


@pytest.mark.parametrize(
    "config",
    [
        {"map": "kasner", "options": {"depth": 8}},
        {"map": "doubling", "options": {"depth": 8}},
        {"map": {"builtin": "linear_markov", "params": {"matrix": [[1, 1], [1, 0]]}}, "options": {"depth": 8}},
        {"map": "tent", "options": {"depth": 6, "preimage_samples": 5}},
    ],
)
def test_analyze_reports_validate(tmp_path, config):
    code, report = run_cli(tmp_path, config)
    assert code == EXIT_OK
    jsonschema.validate(report, SCHEMA)
    assert report["errors"] == []
    expected = normalize_config(config)
    expected["options"]["output_path"] = str(tmp_path / "report.json")
    assert report["input"] == expected


def test_doubling_report_values(tmp_path):
    code, report = run_cli(tmp_path, {"map": "doubling", "options": {"depth": 8}})
    assert code == EXIT_OK
    assert report["matrix"] == [[1, 1], [1, 1]]
    assert report["spectral"]["lambda"] == pytest.approx(2.0, abs=1e-12)
    assert report["entropy"]["exact"] == pytest.approx(math.log(2), abs=1e-12)
    assert report["verification"]["strict"] is False
    assert report["chaos"]["devaney"] is True


def test_report_is_deterministic():
    cfg = normalize_config({"map": "kasner", "options": {"depth": 7, "preimage_samples": 10, "seed": 5}})
    a, _ = run_analysis(cfg)
    b, _ = run_analysis(cfg)
    assert json.dumps(strip_timings(a), sort_keys=True) == json.dumps(strip_timings(b), sort_keys=True)


def test_entropy_subcommand(tmp_path):
    code, report = run_cli(tmp_path, {"map": "doubling", "options": {"depth": 6}}, "entropy")
    assert code == EXIT_OK
    jsonschema.validate(report, SCHEMA)
    assert "chaos" not in report
    assert [r["count"] for r in report["entropy"]["cylinder_estimates"]] == [2, 4, 8, 16, 32, 64]


def test_matrix_subcommand(tmp_path):
    out = tmp_path / "m.json"
    assert main(["matrix", "--matrix", "[[1,1],[1,0]]", "--out", str(out), "--depth", "5"]) == EXIT_OK
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["spectral"]["lambda"] == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)
    assert [c for _, c in report["word_counts"]] == [2, 3, 5, 8, 13]


def test_matrix_zero_row_is_analysis_error(tmp_path):
    out = tmp_path / "m.json"
    assert main(["matrix", "--matrix", "[[1,1],[0,0]]", "--out", str(out)]) == EXIT_ANALYSIS
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["errors"][0]["type"] == "ZeroRow"


def test_config_errors_exit_2(tmp_path):
    code, report = run_cli(tmp_path, {"map": "no_such_map"})
    assert code == EXIT_CONFIG and report is None
    assert main(["analyze"]) == EXIT_CONFIG
    assert main(["analyze", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", "--config", str(bad)]) == EXIT_CONFIG


@pytest.mark.parametrize(
    "raw",
    [
        [],
        {"map": "kasner", "extra": 1},
        {"map": "kasner", "options": {"depth": 1}},
        {"map": "kasner", "options": {"tol": 0}},
        {"map": "kasner", "options": {"emit_csv": ["bogus"]}},
        {"map": "kasner", "options": {"nope": 1}},
        {"map": "kasner", "partition": "weird"},
        {"map": "kasner", "matrix": "guess"},
        {"map": {"piecewise_linear": {"breakpoints": [0, 1]}}},
    ],
)
def test_normalize_rejects(raw):
    with pytest.raises(ConfigError):
        normalize_config(raw)


def test_csv_emission(tmp_path):
    code, report = run_cli(tmp_path, {"map": "doubling", "options": {"depth": 5}}, "analyze", "--emit-csv", "entropy", "counts", "diameters")
    assert code == EXIT_OK
    assert sorted(report["csv_outputs"]) == ["report_counts.csv", "report_diameters.csv", "report_entropy.csv"]
    lines = (tmp_path / "report_counts.csv").read_text().splitlines()
    assert lines[0] == "n,value"
    assert lines[1:] == [f"{n},{float(2**n)}" for n in range(1, 6)]
    ent = (tmp_path / "report_entropy.csv").read_text().splitlines()
    assert float(ent[-1].split(",")[1]) == pytest.approx(math.log(2), abs=1e-12)


def test_piecewise_linear_config(tmp_path):
    config = {"map": {"piecewise_linear": {"domain": "interval", "breakpoints": [0, 0.5, 1], "values": [0, 1, 0]}}, "options": {"depth": 6}}
    code, report = run_cli(tmp_path, config)
    assert code == EXIT_OK
    assert report["matrix"] == [[1, 1], [1, 1]]
    assert report["entropy"]["exact"] == pytest.approx(math.log(2), abs=1e-12)


def test_explicit_partition_and_matrix(tmp_path):
    config = {
        "map": "kasner",
        "partition": [[5 * math.pi / 3, math.pi / 3], [math.pi, 5 * math.pi / 3], [math.pi / 3, math.pi]],
        "matrix": [[0, 1, 1], [1, 0, 1], [1, 1, 0]],
        "options": {"depth": 6},
    }
    code, report = run_cli(tmp_path, config)
    assert code == EXIT_OK
    assert report["matrix_source"] == "given"
    assert report["entropy"]["exact"] == pytest.approx(math.log(2), abs=1e-9)


def test_given_matrix_dimension_mismatch(tmp_path):
    code, report = run_cli(tmp_path, {"map": "doubling", "matrix": [[0, 1, 1], [1, 0, 1], [1, 1, 0]], "options": {"depth": 4}})
    assert code == EXIT_ANALYSIS
    jsonschema.validate(report, SCHEMA)
    assert report["errors"]


def test_kasner_subcommand(tmp_path):
    out = tmp_path / "k.json"
    assert main(["kasner", "--depth", "8", "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    k = report["kasner"]
    assert k["witness"]["min_distance"] < 1e-3 and k["witness"]["max_distance"] > 0.1
    assert set(k["special_point_preimages"].values()) == {2}
    assert k["derivative"]["min_abs"] == pytest.approx(1.0, abs=1e-9)
    assert all(s["count"] in (1, 2) for s in report["preimage_samples"])
