"""End-to-end checks of the YAML-driven command line front-end.

Everything runs on the smallest bundled fixtures (4- and 6-qubit systems) so
the whole module stays in the couple-of-seconds range.
"""

import csv
import json
import os

import numpy as np
import pytest
import yaml

from conftest import fixture_path, load_fixture
from spinadapt.adapt import TRAJECTORY_COLUMNS
from spinadapt.cli import ConfigError, load_config, main


def _write_cfg(tmp_path, cfg, name="config.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(cfg))
    return str(path)


def _base_cfg(tmp_path, fixture="h2_0.74", pool="fermionic-spin"):
    return {
        "system": {"fcidump": fixture_path(fixture)},
        "pool": pool,
        "stop": {"epsilon": 1.0e-6},
        "output": {
            "trajectory": str(tmp_path / "traj.csv"),
            "summary": str(tmp_path / "summary.json"),
        },
    }


def _read_rows(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


# ----------------------------------------------------------------------
# config validation
# ----------------------------------------------------------------------
def test_load_config_rejects_unknown_keys(tmp_path):
    path = _write_cfg(tmp_path, {"pool": "qeb", "typo_section": 1})
    with pytest.raises(ConfigError, match="typo_section"):
        load_config(path)


def test_load_config_rejects_non_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- just\n- a\n- list\n")
    with pytest.raises(ConfigError, match="mapping"):
        load_config(str(path))


def test_load_config_rejects_bad_yaml_and_missing_file(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("a: [unclosed\n")
    with pytest.raises(ConfigError):
        load_config(str(path))
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(str(tmp_path / "nope.yaml"))


def test_main_exit_2_on_config_errors(tmp_path, capsys):
    # unknown top-level key
    cfg = _base_cfg(tmp_path)
    cfg["frobnicate"] = True
    assert main(["run", _write_cfg(tmp_path, cfg, "a.yaml")]) == 2
    assert "config error" in capsys.readouterr().err

    # both system sources at once
    cfg = _base_cfg(tmp_path)
    cfg["system"]["hubbard"] = {"sites": 2}
    assert main(["run", _write_cfg(tmp_path, cfg, "b.yaml")]) == 2

    # neither source
    cfg = _base_cfg(tmp_path)
    cfg["system"] = {"n_frozen": 0}
    assert main(["run", _write_cfg(tmp_path, cfg, "c.yaml")]) == 2

    # unknown pool
    cfg = _base_cfg(tmp_path, pool="super-pool")
    assert main(["run", _write_cfg(tmp_path, cfg, "d.yaml")]) == 2

    # missing fcidump file
    cfg = _base_cfg(tmp_path)
    cfg["system"]["fcidump"] = str(tmp_path / "missing" / "FCIDUMP")
    assert main(["run", _write_cfg(tmp_path, cfg, "e.yaml")]) == 2

    # config file itself absent
    assert main(["run", str(tmp_path / "ghost.yaml")]) == 2


def test_unknown_verb_is_an_argparse_error(tmp_path):
    path = _write_cfg(tmp_path, _base_cfg(tmp_path))
    with pytest.raises(SystemExit):
        main(["frobnicate", path])


# ----------------------------------------------------------------------
# run
# ----------------------------------------------------------------------
def test_run_writes_trajectory_and_summary(tmp_path):
    _, constants = load_fixture("h2_0.74")
    cfg = _base_cfg(tmp_path)
    assert main(["run", _write_cfg(tmp_path, cfg)]) == 0

    rows = _read_rows(cfg["output"]["trajectory"])
    assert list(rows[0].keys()) == list(TRAJECTORY_COLUMNS)
    assert rows[0]["cycle"] == "0"
    assert rows[0]["n_parameters"] == "0"
    assert rows[0]["op_label"] == ""  # reference row carries no operator

    summary = json.loads(open(cfg["output"]["summary"]).read())
    assert summary["system"] == "h2_0.74"
    assert summary["pool"] == "fermionic-spin"
    assert summary["stopping_reason"] == "epsilon"
    assert summary["converged"] is True
    assert summary["final_energy"] == pytest.approx(
        constants["fci_energy"], abs=1e-7
    )
    assert summary["final_fidelity"] == pytest.approx(1.0, abs=1e-6)
    # the last CSV row agrees with the summary
    assert float(rows[-1]["energy"]) == pytest.approx(
        summary["final_energy"], abs=1e-12
    )


def test_run_outputs_are_deterministic(tmp_path):
    cfg = _base_cfg(tmp_path)
    path = _write_cfg(tmp_path, cfg)
    assert main(["run", path]) == 0
    first_traj = open(cfg["output"]["trajectory"], "rb").read()
    first_summary = open(cfg["output"]["summary"], "rb").read()
    assert main(["run", path]) == 0
    assert open(cfg["output"]["trajectory"], "rb").read() == first_traj
    assert open(cfg["output"]["summary"], "rb").read() == first_summary


def test_run_with_max_cnot_zero_stops_at_reference(tmp_path):
    cfg = _base_cfg(tmp_path)
    cfg["stop"]["max_cnot"] = 0
    assert main(["run", _write_cfg(tmp_path, cfg)]) == 0
    rows = _read_rows(cfg["output"]["trajectory"])
    assert len(rows) == 1  # nothing beyond the reference row
    summary = json.loads(open(cfg["output"]["summary"]).read())
    assert summary["stopping_reason"] == "max_cnot"
    assert summary["converged"] is False
    assert summary["n_parameters"] == 0
    assert summary["cnot_count"] == 0


def test_run_projected(tmp_path):
    _, constants = load_fixture("water_like")
    cfg = _base_cfg(tmp_path, fixture="water_like")
    cfg["projection"] = {"enabled": True}  # spin/m default from the fixture
    assert main(["run", _write_cfg(tmp_path, cfg)]) == 0
    summary = json.loads(open(cfg["output"]["summary"]).read())
    assert summary["converged"] is True
    assert summary["final_energy"] == pytest.approx(
        constants["fci_energy"], abs=1e-7
    )
    assert abs(summary["final_spin_squared"]) < 1e-8


def test_run_hubbard_localized(tmp_path):
    cfg = {
        "system": {
            "hubbard": {
                "sites": 2,
                "t": 1.0,
                "u": 4.0,
                "periodic": False,
                "n_elec": 2,
                "sz": 0.0,
                "start": "localized",
            }
        },
        "pool": "fermionic-spin",
        "stop": {"epsilon": 1.0e-6},
        "output": {
            "trajectory": str(tmp_path / "hub.csv"),
            "summary": str(tmp_path / "hub.json"),
        },
    }
    assert main(["run", _write_cfg(tmp_path, cfg)]) == 0
    summary = json.loads(open(cfg["output"]["summary"]).read())
    assert summary["system"] == "hubbard-2"
    # open dimer at U=4, t=1: E0 = U/2 - sqrt((U/2)^2 + 4 t^2)
    assert summary["final_energy"] == pytest.approx(
        2.0 - np.sqrt(8.0), abs=1e-7
    )
    rows = _read_rows(cfg["output"]["trajectory"])
    assert float(rows[0]["energy"]) == pytest.approx(4.0, abs=1e-12)  # U once
    assert all(float(r["particles"]) == pytest.approx(2.0, abs=1e-9) for r in rows)


def test_run_uccsd_baseline(tmp_path):
    _, constants = load_fixture("h2_0.74")
    cfg = _base_cfg(tmp_path, pool="uccsd")
    assert main(["run", _write_cfg(tmp_path, cfg)]) == 0
    rows = _read_rows(cfg["output"]["trajectory"])
    assert len(rows) == 2  # reference row + one optimized row
    assert rows[1]["op_label"] == "uccsd"
    summary = json.loads(open(cfg["output"]["summary"]).read())
    assert summary["pool"] == "uccsd"
    assert summary["n_parameters"] == 3
    assert summary["final_energy"] == pytest.approx(
        constants["fci_energy"], abs=1e-7
    )


# ----------------------------------------------------------------------
# compare-pools / scan
# ----------------------------------------------------------------------
def test_compare_pools_outputs(tmp_path):
    out = tmp_path / "cmp"
    cfg = {
        "system": {"fcidump": fixture_path("h2_0.74")},
        "pools": ["fermionic-spin", "qubit-pauli"],
        "stop": {"epsilon": 1.0e-6},
        "output": {"directory": str(out)},
    }
    assert main(["compare-pools", _write_cfg(tmp_path, cfg)]) == 0
    assert (out / "fermionic-spin.csv").is_file()
    assert (out / "qubit-pauli.csv").is_file()

    with open(out / "comparison.csv", newline="") as handle:
        table = list(csv.reader(handle))
    assert table[0][0] == "n_params"
    assert "fermionic-spin:energy" in table[0]
    assert "qubit-pauli:cnot_count" in table[0]

    summary = json.loads((out / "summary.json").read_text())
    assert set(summary["runs"]) == {"fermionic-spin", "qubit-pauli"}
    for run in summary["runs"].values():
        assert run["stopping_reason"] == "epsilon"


def test_compare_pools_with_projection_suffixes(tmp_path):
    out = tmp_path / "cmp"
    cfg = {
        "system": {"fcidump": fixture_path("h2_0.74")},
        "pools": ["fermionic-spin"],
        "projections": [False, True],
        "stop": {"epsilon": 1.0e-6},
        "output": {"directory": str(out)},
    }
    assert main(["compare-pools", _write_cfg(tmp_path, cfg)]) == 0
    assert (out / "fermionic-spin.csv").is_file()
    assert (out / "fermionic-spin-sp.csv").is_file()
    summary = json.loads((out / "summary.json").read_text())
    assert set(summary["runs"]) == {"fermionic-spin", "fermionic-spin-sp"}


def test_compare_pools_requires_directory_and_pools(tmp_path):
    cfg = {
        "system": {"fcidump": fixture_path("h2_0.74")},
        "pools": ["fermionic-spin"],
        "output": {},
    }
    assert main(["compare-pools", _write_cfg(tmp_path, cfg, "no_dir.yaml")]) == 2
    cfg = {
        "system": {"fcidump": fixture_path("h2_0.74")},
        "output": {"directory": str(tmp_path / "x")},
    }
    assert main(["compare-pools", _write_cfg(tmp_path, cfg, "no_pools.yaml")]) == 2


def test_scan_over_bond_lengths(tmp_path):
    out = tmp_path / "scan"
    cfg = {
        "pool": "fermionic-spin",
        "stop": {"epsilon": 1.0e-6},
        "scan": {
            "fixtures": [
                {"tag": "0.74", "fcidump": fixture_path("h2_0.74")},
                {"tag": "2.50", "fcidump": fixture_path("h2_2.50")},
            ]
        },
        "output": {"directory": str(out)},
    }
    assert main(["scan", _write_cfg(tmp_path, cfg)]) == 0
    assert (out / "0.74.csv").is_file()
    assert (out / "2.50.csv").is_file()

    with open(out / "scan.csv", newline="") as handle:
        points = list(csv.DictReader(handle))
    assert [p["tag"] for p in points] == ["0.74", "2.50"]
    for name, point in zip(("h2_0.74", "h2_2.50"), points):
        _, constants = load_fixture(name)
        assert float(point["final_energy"]) == pytest.approx(
            constants["fci_energy"], abs=1e-7
        )

    summary = json.loads((out / "summary.json").read_text())
    errors = [p["energy_error"] for p in summary["points"]]
    assert summary["non_parallelity_error"] == pytest.approx(
        max(errors) - min(errors), abs=1e-15
    )
    assert summary["non_parallelity_error"] < 1e-6  # both converged


def test_scan_workers_env_does_not_change_results(tmp_path, monkeypatch):
    def run_into(directory):
        cfg = {
            "pool": "qeb",
            "stop": {"epsilon": 1.0e-6},
            "scan": {
                "fixtures": [
                    {"tag": "a", "fcidump": fixture_path("h2_0.74")},
                    {"tag": "b", "fcidump": fixture_path("h2_1.50")},
                ]
            },
            "output": {"directory": str(directory)},
        }
        path = _write_cfg(tmp_path, cfg, os.path.basename(directory) + ".yaml")
        assert main(["scan", path]) == 0
        return (directory / "scan.csv").read_bytes()

    monkeypatch.delenv("SPINADAPT_WORKERS", raising=False)
    serial = run_into(tmp_path / "serial")
    monkeypatch.setenv("SPINADAPT_WORKERS", "2")
    threaded = run_into(tmp_path / "threaded")
    assert serial == threaded


# ----------------------------------------------------------------------
# props / fci
# ----------------------------------------------------------------------
def test_props_reports_both_dipoles(tmp_path):
    out = str(tmp_path / "props.json")
    cfg = {
        "system": {"fcidump": fixture_path("water_like")},
        "pool": "fermionic-spin",
        "stop": {"epsilon": 1.0e-9, "max_params": 2},  # truncated on purpose
        "property": {"dipoles": fixture_path("water_like", "DIPOLES")},
        "output": {"summary": out},
    }
    assert main(["props", _write_cfg(tmp_path, cfg)]) == 0
    report = json.loads(open(out).read())
    assert report["system"] == "water_like"
    assert report["run"]["n_parameters"] == 2
    relaxed = np.asarray(report["dipole_relaxed"], dtype=float)
    unrelaxed = np.asarray(report["dipole_unrelaxed"], dtype=float)
    assert relaxed.shape == unrelaxed.shape == (3,)
    # orbital relaxation has to matter for a truncated ansatz
    assert np.max(np.abs(relaxed - unrelaxed)) > 1e-4
    assert report["solver_residual"] < 1e-10


def test_props_rejects_uccsd_and_missing_dipoles(tmp_path):
    cfg = {
        "system": {"fcidump": fixture_path("water_like")},
        "pool": "uccsd",
        "property": {"dipoles": fixture_path("water_like", "DIPOLES")},
        "output": {"summary": str(tmp_path / "p.json")},
    }
    assert main(["props", _write_cfg(tmp_path, cfg, "u.yaml")]) == 2
    cfg["pool"] = "fermionic-spin"
    cfg["property"] = {"dipoles": str(tmp_path / "DIPOLES")}
    assert main(["props", _write_cfg(tmp_path, cfg, "m.yaml")]) == 2


def test_fci_verb_payload(tmp_path):
    _, constants = load_fixture("h2_2.50")
    out = str(tmp_path / "fci.json")
    cfg = {
        "system": {"fcidump": fixture_path("h2_2.50")},
        "output": {"summary": out},
    }
    assert main(["fci", _write_cfg(tmp_path, cfg)]) == 0
    payload = json.loads(open(out).read())
    assert payload["system"] == "h2_2.50"
    assert payload["n_qubits"] == 4
    assert payload["n_electrons"] == 2
    assert payload["fci_energy"] == pytest.approx(
        constants["fci_energy"], abs=1e-9
    )
    assert payload["reference_energy"] == pytest.approx(
        constants["hf_energy"], abs=1e-9
    )
    assert 0.0 < payload["reference_fidelity"] <= 1.0
