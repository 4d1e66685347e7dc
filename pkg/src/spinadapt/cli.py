"""Batch command-line front-end.

Verbs (each takes one YAML config file):

* ``run`` -- one adaptive (or fixed-ansatz ``uccsd``) trajectory; writes a
  trajectory CSV and a summary JSON.
* ``compare-pools`` -- the same system swept over pool kinds (optionally with
  projection on and off); per-run CSVs plus one wide comparison CSV.
* ``scan`` -- a list of geometry-tagged fixtures run with identical settings;
  emits per-point energies/errors and the max-minus-min error spread.
* ``props`` -- run, then solve the orbital response and report unrelaxed vs
  relaxed dipole moments.
* ``fci`` -- oracle only: exact ground state, reference energy, and overlap.

Config schema (YAML, unknown top-level keys rejected)::

    system:                    # exactly one of fcidump | hubbard
      fcidump: path/FCIDUMP
      n_frozen: 0
      hubbard: {sites: 6, u: 8.0, t: 1.0, periodic: true,
                n_elec: 6, sz: 0.0, start: localized}
    pool: fermionic-spin       # or pools: [...] for compare-pools
    projection: {enabled: false, spin: 0.0, m: 0.0, n_points: null}
    stop: {epsilon: 1.0e-3, max_params: null, max_cnot: null, max_cycles: 500}
    optimizer: {gtol: 1.0e-6, maxiter: 2000}
    reference: {fidelity: true}
    property: {dipoles: path/DIPOLES, response: true}
    output: {trajectory: t.csv, summary: s.json, directory: out/}
    scan: {fixtures: [{tag: "1.4", fcidump: path}, ...]}

Independent trajectories of ``compare-pools``/``scan`` run in a thread pool
when the environment variable ``SPINADAPT_WORKERS`` is set above 1.  Output
files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import yaml

from .adapt import (
    AdaptResult,
    run_adapt,
    run_uccsd,
    summary_dict,
    write_trajectory,
)
from .hamiltonians import (
    build_hubbard,
    build_molecular_hamiltonian,
    build_spin_operators,
    hubbard_localized_occupation,
)
from .integrals import (
    freeze_core,
    hf_occupation,
    parse_property_integrals,
    read_fcidump,
)
from .pools import POOL_KINDS, build_pool
from .projection import make_projection_grid
from .response import property_report
from .statevector import basis_state, exact_ground_state, expectation, fidelity

__all__ = ["main", "load_config", "ConfigError"]

log = logging.getLogger("spinadapt")


class ConfigError(ValueError):
    pass


_TOP_KEYS = {
    "system",
    "pool",
    "pools",
    "projection",
    "projections",
    "stop",
    "optimizer",
    "reference",
    "property",
    "output",
    "scan",
}
_POOLS_WITH_BASELINE = POOL_KINDS + ("uccsd",)


def load_config(path: str) -> dict:
    try:
        with open(path) as handle:
            cfg = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path!r} is not valid YAML: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a mapping of sections")
    unknown = set(cfg) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _section(cfg: dict, name: str, default=None) -> dict:
    value = cfg.get(name, default if default is not None else {})
    if not isinstance(value, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    return dict(value)


def _require_file(path, what: str) -> str:
    if not isinstance(path, str) or not os.path.isfile(path):
        raise ConfigError(f"{what} file not found: {path!r}")
    return path


class System:
    """Everything derived from the ``system`` section."""

    def __init__(self, cfg: dict):
        section = _section(cfg, "system")
        extra = set(section) - {"fcidump", "hubbard", "n_frozen"}
        if extra:
            raise ConfigError(f"unknown system keys: {sorted(extra)}")
        has_f, has_h = "fcidump" in section, "hubbard" in section
        if has_f == has_h:
            raise ConfigError("system needs exactly one of 'fcidump' or 'hubbard'")
        self.n_frozen = int(section.get("n_frozen", 0) or 0)
        self.mi_full = None
        if has_f:
            path = _require_file(section["fcidump"], "FCIDUMP")
            self.mi_full = read_fcidump(path)
            mi = freeze_core(self.mi_full, self.n_frozen) if self.n_frozen else self.mi_full
            self.mi = mi
            self.hamiltonian = build_molecular_hamiltonian(mi)
            self.n_orbitals = mi.n_orb
            self.n_elec = mi.n_elec
            self.sz = mi.ms2 / 2.0
            self.occupation = hf_occupation(mi.n_alpha, mi.n_beta)
            self.name = os.path.basename(os.path.dirname(path)) or path
        else:
            spec = dict(section["hubbard"] or {})
            extra = set(spec) - {"sites", "t", "u", "periodic", "n_elec", "sz", "start"}
            if extra:
                raise ConfigError(f"unknown hubbard keys: {sorted(extra)}")
            sites = int(spec.get("sites", 6))
            self.hamiltonian = build_hubbard(
                sites,
                t=float(spec.get("t", 1.0)),
                u=float(spec.get("u", 8.0)),
                periodic=bool(spec.get("periodic", True)),
            )
            self.n_orbitals = sites
            self.n_elec = int(spec.get("n_elec", sites))
            self.sz = float(spec.get("sz", 0.0 if self.n_elec % 2 == 0 else 0.5))
            start = spec.get("start", "localized")
            if start != "localized":
                raise ConfigError("hubbard start supports only 'localized'")
            self.occupation = hubbard_localized_occupation(sites, self.n_elec)
            self.name = f"hubbard-{sites}"
        self.n_qubits = 2 * self.n_orbitals
        self.reference = basis_state(self.n_qubits, self.occupation)


def _build_grid(cfg: dict, system: System, override_enabled=None):
    section = _section(cfg, "projection")
    extra = set(section) - {"enabled", "spin", "m", "n_points"}
    if extra:
        raise ConfigError(f"unknown projection keys: {sorted(extra)}")
    enabled = section.get("enabled", False) if override_enabled is None else override_enabled
    if not enabled:
        return None
    m = float(section.get("m", system.sz))
    spin = float(section.get("spin", abs(m)))
    n_points = section.get("n_points")
    return make_projection_grid(
        spin,
        None if n_points is None else int(n_points),
        m=m,
        n_orbitals=system.n_orbitals,
    )


def _oracle(system: System, want_fidelity: bool):
    if not want_fidelity:
        return None, None
    energy, state = exact_ground_state(
        system.hamiltonian, system.n_qubits, system.n_elec, system.sz
    )
    return energy, state


def _atomic(path: str, writer) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    tmp = path + ".tmp"
    writer(tmp)
    os.replace(tmp, path)


def _write_json(path: str, payload: dict) -> None:
    def w(tmp):
        with open(tmp, "w") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")

    _atomic(path, w)


def _run_one(cfg: dict, system: System, pool_kind: str, grid):
    stop = _section(cfg, "stop")
    extra = set(stop) - {"epsilon", "max_params", "max_cnot", "max_cycles"}
    if extra:
        raise ConfigError(f"unknown stop keys: {sorted(extra)}")
    opt = _section(cfg, "optimizer")
    extra = set(opt) - {"gtol", "maxiter"}
    if extra:
        raise ConfigError(f"unknown optimizer keys: {sorted(extra)}")
    want_fid = bool(_section(cfg, "reference").get("fidelity", True))
    fci_energy, fci_state = _oracle(system, want_fid)

    def as_opt_int(v):
        return None if v is None else int(v)

    if pool_kind == "uccsd":
        out = run_uccsd(
            system.hamiltonian,
            system.n_qubits,
            system.occupation,
            fci_state=fci_state,
            fci_energy=fci_energy,
            gtol=float(opt.get("gtol", 1e-6)),
            maxiter=int(opt.get("maxiter", 5000)),
        )
        return out, fci_energy, fci_state

    pool = build_pool(pool_kind, system.n_orbitals)
    result = run_adapt(
        system.hamiltonian,
        pool,
        system.reference,
        grid=grid,
        fci_state=fci_state,
        fci_energy=fci_energy,
        grad_norm_tol=float(stop.get("epsilon", 1e-3)),
        max_params=as_opt_int(stop.get("max_params")),
        max_cnot=as_opt_int(stop.get("max_cnot")),
        max_cycles=int(stop.get("max_cycles", 500)),
        gtol=float(opt.get("gtol", 1e-6)),
        maxiter=int(opt.get("maxiter", 2000)),
    )
    return result, fci_energy, fci_state


def _uccsd_rows(system: System, out: dict) -> list:
    spin_ops = build_spin_operators(system.n_orbitals)
    state = out["state"]
    return [
        {
            "cycle": 0,
            "op_index": None,
            "op_label": None,
            "max_abs_gradient": None,
            "gradient_norm": None,
            "energy": float(
                expectation(system.hamiltonian, system.reference)
            ),
            "energy_error": None,
            "spin_squared": expectation(spin_ops.s_squared, system.reference),
            "spin_z": expectation(spin_ops.s_z, system.reference),
            "particles": expectation(spin_ops.number, system.reference),
            "fidelity": None,
            "n_parameters": 0,
            "cnot_count": 0,
            "vqe_iterations": None,
        },
        {
            "cycle": 1,
            "op_index": None,
            "op_label": "uccsd",
            "max_abs_gradient": None,
            "gradient_norm": None,
            "energy": out["energy"],
            "energy_error": out["energy_error"],
            "spin_squared": expectation(spin_ops.s_squared, state),
            "spin_z": expectation(spin_ops.s_z, state),
            "particles": expectation(spin_ops.number, state),
            "fidelity": out["fidelity"],
            "n_parameters": out["n_parameters"],
            "cnot_count": out["cnot_count"],
            "vqe_iterations": out["vqe_iterations"],
        },
    ]


def _pool_kind(cfg: dict) -> str:
    kind = cfg.get("pool")
    if kind not in _POOLS_WITH_BASELINE:
        raise ConfigError(f"pool must be one of {_POOLS_WITH_BASELINE}, got {kind!r}")
    return kind


def cmd_run(cfg: dict) -> int:
    system = System(cfg)
    kind = _pool_kind(cfg)
    grid = _build_grid(cfg, system)
    output = _section(cfg, "output")
    result, fci_energy, _ = _run_one(cfg, system, kind, grid)

    if isinstance(result, AdaptResult):
        rows = result.rows
        summary = summary_dict(result)
    else:
        rows = _uccsd_rows(system, result)
        summary = {
            "pool": "uccsd",
            "stopping_reason": "epsilon",
            "converged": True,
            "n_parameters": result["n_parameters"],
            "n_active_parameters": result["n_active_parameters"],
            "cnot_count": result["cnot_count"],
            "final_energy": result["energy"],
            "fci_energy": fci_energy,
            "final_energy_error": result["energy_error"],
            "final_fidelity": result["fidelity"],
            "final_spin_squared": rows[-1]["spin_squared"],
            "final_spin_z": rows[-1]["spin_z"],
            "final_particles": rows[-1]["particles"],
        }
    summary["system"] = system.name
    if output.get("trajectory"):
        _atomic(output["trajectory"], lambda tmp: write_trajectory(tmp, rows))
    if output.get("summary"):
        _write_json(output["summary"], summary)
    log.info("run finished: E=%.10f (%s)", summary["final_energy"], summary["stopping_reason"])
    return 0


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SPINADAPT_WORKERS", "1")))
    except ValueError:
        return 1


def _map_maybe_parallel(fn, items):
    n = _workers()
    if n == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


_COMPARE_FIELDS = (
    "cnot_count",
    "energy",
    "energy_error",
    "fidelity",
    "spin_squared",
    "particles",
)


def cmd_compare_pools(cfg: dict) -> int:
    system = System(cfg)
    kinds = cfg.get("pools") or ([cfg["pool"]] if cfg.get("pool") else None)
    if not kinds:
        raise ConfigError("compare-pools needs a 'pools' list")
    for kind in kinds:
        if kind not in POOL_KINDS:
            raise ConfigError(f"unknown pool kind {kind!r}")
    projections = cfg.get("projections")
    if projections is None:
        projections = [bool(_section(cfg, "projection").get("enabled", False))]
    output = _section(cfg, "output")
    directory = output.get("directory")
    if not directory:
        raise ConfigError("compare-pools needs output.directory")
    os.makedirs(directory, exist_ok=True)

    jobs = [(kind, proj) for kind in kinds for proj in projections]

    def one(job):
        kind, proj = job
        label = kind + ("-sp" if proj else "")
        grid = _build_grid(cfg, system, override_enabled=proj)
        result, _, _ = _run_one(cfg, system, kind, grid)
        path = os.path.join(directory, f"{label}.csv")
        _atomic(path, lambda tmp: write_trajectory(tmp, result.rows))
        log.info("pool %s: E=%.10f after %d params", label, result.energy, len(result.op_indices))
        return label, result

    results = _map_maybe_parallel(one, jobs)

    n_rows = max(len(r.rows) for _, r in results)
    header = ["cycle"]
    for label, _ in results:
        header += [f"{label}:{f}" for f in _COMPARE_FIELDS]

    def write_wide(tmp):
        with open(tmp, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["n_params"] + header[1:])
            for cycle in range(n_rows):
                cells = [str(cycle)]
                for _, result in results:
                    if cycle < len(result.rows):
                        row = result.rows[cycle]
                        cells += [
                            ""
                            if row[f] is None
                            else ("%.12e" % row[f] if isinstance(row[f], float) else str(row[f]))
                            for f in _COMPARE_FIELDS
                        ]
                    else:
                        cells += [""] * len(_COMPARE_FIELDS)
                writer.writerow(cells)

    _atomic(os.path.join(directory, "comparison.csv"), write_wide)
    _write_json(
        os.path.join(directory, "summary.json"),
        {"system": system.name, "runs": {label: summary_dict(r) for label, r in results}},
    )
    return 0


def cmd_scan(cfg: dict) -> int:
    scan = _section(cfg, "scan")
    fixtures = scan.get("fixtures")
    if not fixtures:
        raise ConfigError("scan needs scan.fixtures: [{tag, fcidump}, ...]")
    kind = _pool_kind(cfg)
    output = _section(cfg, "output")
    directory = output.get("directory")
    if not directory:
        raise ConfigError("scan needs output.directory")
    os.makedirs(directory, exist_ok=True)

    def one(fixture):
        if not isinstance(fixture, dict) or "tag" not in fixture or "fcidump" not in fixture:
            raise ConfigError("each scan fixture needs 'tag' and 'fcidump'")
        sub = dict(cfg)
        sub["system"] = {
            "fcidump": fixture["fcidump"],
            "n_frozen": _section(cfg, "system").get("n_frozen", 0) if "system" in cfg else 0,
        }
        system = System(sub)
        grid = _build_grid(cfg, system)
        result, fci_energy, _ = _run_one(cfg, system, kind, grid)
        rows = result.rows if isinstance(result, AdaptResult) else _uccsd_rows(system, result)
        path = os.path.join(directory, f"{fixture['tag']}.csv")
        _atomic(path, lambda tmp: write_trajectory(tmp, rows))
        final = rows[-1]
        return {
            "tag": str(fixture["tag"]),
            "final_energy": final["energy"],
            "fci_energy": fci_energy,
            "energy_error": None if fci_energy is None else final["energy"] - fci_energy,
            "n_parameters": final["n_parameters"],
            "cnot_count": final["cnot_count"],
            "spin_squared": final["spin_squared"],
            "fidelity": final["fidelity"],
        }

    points = _map_maybe_parallel(one, list(fixtures))

    def write_scan(tmp):
        cols = (
            "tag",
            "final_energy",
            "fci_energy",
            "energy_error",
            "n_parameters",
            "cnot_count",
            "spin_squared",
            "fidelity",
        )
        with open(tmp, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(cols)
            for point in points:
                writer.writerow(
                    [
                        ""
                        if point[c] is None
                        else ("%.12e" % point[c] if isinstance(point[c], float) else str(point[c]))
                        for c in cols
                    ]
                )

    _atomic(os.path.join(directory, "scan.csv"), write_scan)
    errors = [p["energy_error"] for p in points if p["energy_error"] is not None]
    npe = (max(errors) - min(errors)) if errors else None
    _write_json(
        os.path.join(directory, "summary.json"),
        {"points": points, "non_parallelity_error": npe},
    )
    if npe is not None:
        log.info("scan spread (max-min error): %.3e Ha", npe)
    return 0


def cmd_props(cfg: dict) -> int:
    system = System(cfg)
    if system.mi_full is None:
        raise ConfigError("props needs an fcidump system")
    prop = _section(cfg, "property")
    extra = set(prop) - {"dipoles", "response"}
    if extra:
        raise ConfigError(f"unknown property keys: {sorted(extra)}")
    dip_path = _require_file(prop.get("dipoles"), "dipole integrals")
    with open(dip_path) as handle:
        dipoles = parse_property_integrals(handle.read(), system.mi_full.n_orb)

    kind = _pool_kind(cfg)
    grid = _build_grid(cfg, system)
    output = _section(cfg, "output")
    result, _, _ = _run_one(cfg, system, kind, grid)
    if not isinstance(result, AdaptResult):
        raise ConfigError("props works with adaptive pools, not 'uccsd'")

    report = {"system": system.name, "run": summary_dict(result)}
    if prop.get("response", True):
        report.update(
            property_report(
                system.mi_full,
                dipoles,
                result.state,
                n_frozen=system.n_frozen,
                grid=grid,
            )
        )
    if output.get("trajectory"):
        _atomic(output["trajectory"], lambda tmp: write_trajectory(tmp, result.rows))
    _write_json(output.get("summary", "properties.json"), report)
    if "dipole_relaxed" in report:
        log.info(
            "dipole (relaxed): [%s] a.u.",
            " ".join("%.6f" % x for x in report["dipole_relaxed"]),
        )
    return 0


def cmd_fci(cfg: dict) -> int:
    system = System(cfg)
    output = _section(cfg, "output")
    energy, state = exact_ground_state(
        system.hamiltonian, system.n_qubits, system.n_elec, system.sz
    )
    reference_energy = expectation(system.hamiltonian, system.reference)
    payload = {
        "system": system.name,
        "n_qubits": system.n_qubits,
        "n_electrons": system.n_elec,
        "spin_z": system.sz,
        "fci_energy": energy,
        "reference_energy": reference_energy,
        "reference_fidelity": fidelity(state, system.reference),
    }
    _write_json(output.get("summary", "fci.json"), payload)
    log.info("FCI energy: %.10f", energy)
    return 0


_VERBS = {
    "run": cmd_run,
    "compare-pools": cmd_compare_pools,
    "scan": cmd_scan,
    "props": cmd_props,
    "fci": cmd_fci,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spinadapt",
        description="Adaptive variational eigensolver with spin projection.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in _VERBS:
        p = sub.add_parser(verb)
        p.add_argument("config", help="YAML config file")
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(args.config)
        return _VERBS[args.verb](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("run failed: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
