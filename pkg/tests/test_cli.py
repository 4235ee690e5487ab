import json

import numpy as np
import pytest

from swiptevt import cli
from swiptevt.config import (
    EXPERIMENTS,
    ConfigError,
    config_hash,
    load_manifest,
    manifest_violations,
    scenario_from_dict,
    scenario_violations,
)
from swiptevt.csvio import read_records, write_records
from swiptevt.frozen import baseline_config
from swiptevt.quadrature import QuadratureError

SCENARIO = {"L": 20, "d1": {"min": 0.5, "max": 0.8}, "d2": {"min": 0.5, "max": 0.7},
            "zeta": 2.7, "gamma_s_dbm": 25.0, "sigma2": 1.0, "eta": 0.9,
            "alpha": 0.3, "lambda": 0.4, "T": 1.0}


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def test_baseline_scenario_reproduces_frozen_geometry():
    assert scenario_from_dict(SCENARIO, geometry_seed=1) == baseline_config(20)


def test_valid_config_has_no_violations():
    assert scenario_violations(SCENARIO, 1) == []


@pytest.mark.parametrize("change, name", [
    ({"alpha": 1.0}, "ts_factor_at_unity"),
    ({"d1": [0.5] * 19 + [-0.2]}, "nonpositive_distance"),
    ({"d1": {"min": -0.5, "max": 0.8}}, "nonpositive_distance"),
    ({"surprise": 1}, "unknown_key:surprise"),
    ({"L": 0}, "nonpositive_relay_count"),
    ({"eta": "high"}, "bad_type:eta"),
    ({"d2": [0.6] * 3}, "distance_count_mismatch"),
])
def test_violations(change, name):
    assert name in scenario_violations({**SCENARIO, **change}, 1)


def test_all_violations_listed():
    bad = scenario_violations({**SCENARIO, "alpha": 1.0, "lambda": -0.1, "extra": 0}, 1)
    assert {"ts_factor_at_unity", "negative_ps_factor", "unknown_key:extra"} <= set(bad)


def test_manifest_rules():
    good = {"experiment": "cdf_compare", "scenario": SCENARIO, "seeds": {"geometry": 1, "sampling": 3}}
    assert manifest_violations(good) == []
    assert "unknown_experiment" in manifest_violations({**good, "experiment": "fig99"})
    assert "nonpositive_monte_carlo_n" in manifest_violations({**good, "monte_carlo_n": 0})
    assert "missing_sampling_seed" in manifest_violations({**good, "seeds": {"geometry": 1}})
    no_mc = {"experiment": "optimize_ergodic", "scenario": SCENARIO}
    assert manifest_violations(no_mc) == []
    with pytest.raises(ConfigError):
        load_manifest({**good, "colour": "red"})


def test_scenario_file_reference(tmp_path):
    _write(tmp_path, "scen.json", SCENARIO)
    path = _write(tmp_path, "m.json", {"experiment": "optimize_ergodic", "scenario": "scen.json"})
    assert load_manifest(path).scenario_config() == baseline_config(20)


def test_config_hash_canonical():
    assert config_hash({"a": 1, "b": [1.5]}) == config_hash({"b": [1.5], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_csv_round_trip(tmp_path):
    records = [{"name": "x", "n": 3, "flag": True, "v": 0.1 + 0.2},
               {"name": "y,z", "n": -1, "flag": False, "v": float(np.float64(1e-300) / 3)}]
    path = tmp_path / "t.csv"
    write_records(path, records, {"config_hash": "abc", "seed": 4})
    meta, back = read_records(path)
    assert back == records
    assert meta == {"config_hash": "abc", "seed": "4"}
    assert b"\r" not in path.read_bytes()


def test_list_and_validate(capsys, tmp_path):
    assert cli.main(["list-experiments"]) == 0
    listed = capsys.readouterr().out
    assert all(name in listed for name in EXPERIMENTS)
    assert cli.main(["validate", "--config", str(_write(tmp_path, "ok.json", SCENARIO))]) == 0
    bad = _write(tmp_path, "bad.json", {**SCENARIO, "alpha": 1.0})
    assert cli.main(["validate", "--config", str(bad)]) == 2
    assert "ts_factor_at_unity" in capsys.readouterr().out
    assert cli.main(["validate", "--config", "optimize_outage"]) == 0


def test_run_is_deterministic(tmp_path):
    manifest = {"experiment": "cdf_compare", "scenario": SCENARIO, "monte_carlo_n": 2000,
                "seeds": {"geometry": 1, "sampling": 3}, "grid": {"L": [5], "points": 50}}
    path = _write(tmp_path, "m.json", manifest)
    assert cli.main(["run", "--config", str(path), "--out", str(tmp_path / "a")]) == 0
    assert cli.main(["run", "--config", str(path), "--out", str(tmp_path / "b")]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == ["cdf_compare_L5.csv", "summary.csv"]
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    meta, rows = read_records(tmp_path / "a" / "summary.csv")
    assert meta["seed"] == "3" and len(meta["config_hash"]) == 16
    assert rows[0]["L"] == 5 and 0.0 < rows[0]["ks_exact_product"] < 0.1


def test_seed_and_sample_overrides(tmp_path):
    manifest = {"experiment": "cdf_compare", "scenario": SCENARIO, "monte_carlo_n": 2000,
                "seeds": {"geometry": 1, "sampling": 3}, "grid": {"L": [5], "points": 50}}
    path = _write(tmp_path, "m.json", manifest)
    cli.main(["run", "--config", str(path), "--out", str(tmp_path / "a")])
    cli.main(["run", "--config", str(path), "--out", str(tmp_path / "b"), "--seed-override", "9",
              "--mc-samples", "1000"])
    meta_a, rows_a = read_records(tmp_path / "a" / "summary.csv")
    meta_b, rows_b = read_records(tmp_path / "b" / "summary.csv")
    assert meta_b["seed"] == "9" and meta_a["config_hash"] != meta_b["config_hash"]
    assert rows_a != rows_b


def test_run_validation_failure(tmp_path, capsys):
    path = _write(tmp_path, "m.json", {"experiment": "cdf_compare", "scenario": SCENARIO})
    assert cli.main(["run", "--config", str(path), "--out", str(tmp_path / "o")]) == 2
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["status"] == "validation_failure"
    assert "missing_sampling_seed" in record["violations"]
    assert not (tmp_path / "o").exists()


def test_run_numerical_failure(tmp_path, capsys, monkeypatch):
    def boom(_manifest):
        raise QuadratureError("did not converge")

    monkeypatch.setattr(cli, "run_experiment", boom)
    path = _write(tmp_path, "m.json", {"experiment": "optimize_ergodic", "scenario": SCENARIO})
    assert cli.main(["run", "--config", str(path), "--out", str(tmp_path / "o")]) == 3
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["status"] == "numerical_failure" and record["error_type"] == "QuadratureError"


@pytest.mark.parametrize("name", ["optimize_outage", "optimize_ergodic", "ordering_check"])
def test_presets_run(tmp_path, name):
    assert cli.main(["run", "--config", name, "--out", str(tmp_path)]) == 0
    _, rows = read_records(tmp_path / "summary.csv")
    assert rows
