import json

import numpy as np
import pytest

from lattice_limit.cli import (
    ConfigError,
    build_potential,
    main,
    resolve_config,
    stream_rng,
)
from lattice_limit import load_grid


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data, indent=2))
    return path


def test_resolve_fills_defaults():
    cfg = resolve_config({"experiment": "phi-check", "seed": 3})
    assert cfg["scaling"]["profile"] == "meyer"
    assert cfg["probe"] == [-1.0, 0.0]
    assert "partition" in cfg["tolerances"]


def test_resolve_rejects_missing_seed():
    with pytest.raises(ConfigError, match="seed"):
        resolve_config({"experiment": "phi-check"})


def test_resolve_rejects_unknown_experiment():
    with pytest.raises(ConfigError, match="experiment"):
        resolve_config({"experiment": "nope", "seed": 1})


def test_resolve_rejects_bad_h_list():
    with pytest.raises(ConfigError, match="decreasing"):
        resolve_config({"experiment": "free-rates", "seed": 1,
                        "h_list": [0.1, 0.2, 0.05]})
    with pytest.raises(ConfigError, match="at least 3"):
        resolve_config({"experiment": "free-rates", "seed": 1,
                        "h_list": [0.2, 0.1]})


def test_resolve_rejects_bad_probe():
    with pytest.raises(ConfigError, match="probe"):
        resolve_config({"experiment": "phi-check", "seed": 1, "probe": [1.0, 0.0]})


def test_resolve_rejects_incommensurate_mesh():
    with pytest.raises(ConfigError):
        resolve_config({"experiment": "resolvent-rates", "seed": 1,
                        "lattice": {"extent": 8.0},
                        "h_list": [0.3, 0.15, 0.075]})


def test_build_potential_kinds():
    assert build_potential(None) is None
    assert build_potential({"kind": "hoelder", "alpha": 0.5}).hoelder_alpha == 0.5
    assert build_potential({"kind": "harmonic"}).kind == "harmonic"
    with pytest.raises(ConfigError):
        build_potential({"kind": "mystery"})


def test_stream_rng_reproducible():
    a = stream_rng(7, 3).standard_normal(4)
    b = stream_rng(7, 3).standard_normal(4)
    c = stream_rng(7, 4).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_validate_command(tmp_path, capsys):
    path = write_config(tmp_path, {"experiment": "phi-check", "seed": 7})
    assert main(["validate", "--config", str(path)]) == 0
    resolved = json.loads(capsys.readouterr().out)
    assert resolved["experiment"] == "phi-check"


def test_invalid_config_exit_code(tmp_path, capsys):
    path = write_config(tmp_path, {"experiment": "phi-check"})
    assert main(["validate", "--config", str(path)]) == 2
    assert "line" in capsys.readouterr().err


def test_json_syntax_error_reports_line(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "experiment": "phi-check",\n}\n')
    assert main(["validate", "--config", str(path)]) == 2
    assert "line" in capsys.readouterr().err


def test_run_phi_check(tmp_path):
    path = write_config(tmp_path, {"experiment": "phi-check", "seed": 7})
    out = tmp_path / "out"
    assert main(["run", "--config", str(path), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["pass"] is True
    assert report["config"]["seed"] == 7
    assert report["results"]["partition_defect"] <= 1e-10
    csv = (out / "rates.csv").read_text().splitlines()
    assert csv[0] == "h,error,bound"
    assert (out / "grids").is_dir()


def test_run_phi_check_broken_profile_fails(tmp_path):
    path = write_config(tmp_path, {"experiment": "phi-check", "seed": 7,
                                   "scaling": {"profile": "meyer", "amplitude": 0.9}})
    out = tmp_path / "out"
    assert main(["run", "--config", str(path), "--out", str(out)]) == 1
    report = json.loads((out / "report.json").read_text())
    assert report["pass"] is False


def test_run_free_rates_reproducible(tmp_path):
    config = {"experiment": "free-rates", "seed": 11,
              "h_list": [0.125, 0.0625, 0.03125], "grid_points": 96}
    path = write_config(tmp_path, config)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", str(path), "--out", str(out1)]) == 0
    assert main(["run", "--config", str(path), "--out", str(out2),
                 "--threads", "3"]) == 0
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
    assert (out1 / "rates.csv").read_bytes() == (out2 / "rates.csv").read_bytes()
    report = json.loads((out1 / "report.json").read_text())
    assert report["results"]["free1"]["pass"] and report["results"]["free2"]["pass"]
    rows = (out1 / "rates.csv").read_text().splitlines()
    assert len(rows) == 1 + 2 * len(config["h_list"])


def test_run_hausdorff(tmp_path):
    path = write_config(tmp_path, {"experiment": "hausdorff", "seed": 5,
                                   "trials": 150, "size": 10})
    out = tmp_path / "out"
    assert main(["run", "--config", str(path), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["results"]["violations"] == 0


def test_run_spectrum_writes_grid_snapshot(tmp_path):
    config = {"experiment": "spectrum", "seed": 9,
              "lattice": {"extent": 20.0}, "potential": {"kind": "harmonic"},
              "h_list": [0.5, 0.25], "modes": 4}
    path = write_config(tmp_path, config)
    out = tmp_path / "out"
    assert main(["run", "--config", str(path), "--out", str(out)]) == 0
    snapshot = load_grid(out / "grids" / "ground_state.bin")
    assert snapshot.spec.mesh == 0.25
    report = json.loads((out / "report.json").read_text())
    assert report["results"]["boundary_decay"] <= 1e-8
    assert report["results"]["decreasing"] is True


def test_run_environment_thread_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("LATTICE_LIMIT_THREADS", "2")
    path = write_config(tmp_path, {"experiment": "phi-check", "seed": 7})
    out = tmp_path / "out"
    assert main(["run", "--config", str(path), "--out", str(out)]) == 0
