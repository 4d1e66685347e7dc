"""The adaptive loop: screening, selection, optimization, bookkeeping.

Gradient correctness is checked against central finite differences of the
actual energy landscape -- for every pool flavor, with and without the spin
projector -- since analytic/numeric agreement is the load-bearing invariant
of the whole optimizer.
"""

import csv
import json

import numpy as np
import pytest

from conftest import load_fixture, random_state
from spinadapt.adapt import (
    TRAJECTORY_COLUMNS,
    _value_and_gradient,
    build_ansatz_state,
    run_adapt,
    run_uccsd,
    screen_gradients,
    select_operator,
    summary_dict,
    uccsd_excitations,
    vqe_minimize,
    write_summary,
    write_trajectory,
)
from spinadapt.hamiltonians import build_molecular_hamiltonian
from spinadapt.integrals import hf_occupation
from spinadapt.oracles import central_difference, gradient_by_differences
from spinadapt.pools import POOL_KINDS, build_pool
from spinadapt.projection import make_projection_grid, projected_expectation
from spinadapt.statevector import basis_state, exact_ground_state, expectation, fidelity


def _water_setup():
    mi, constants = load_fixture("water_like")
    ham = build_molecular_hamiltonian(mi)
    ref = basis_state(2 * mi.n_orb, hf_occupation(mi.n_alpha, mi.n_beta))
    return mi, constants, ham, ref


def _prepared_state(ham, ref, rng):
    """A non-trivial sector state: a few random rotations on the reference."""
    pool = build_pool("fermionic-spin", 3).excitations
    state = ref
    for idx in rng.choice(len(pool), size=4, replace=False):
        state = pool[idx].apply(state, float(rng.uniform(-0.5, 0.5)))
    return state


def test_screen_gradients_match_finite_differences(rng):
    mi, _, ham, ref = _water_setup()
    state = _prepared_state(ham, ref, rng)
    grid = make_projection_grid(0.0, n_orbitals=3, m=0.0)
    for kind in POOL_KINDS:
        pool = build_pool(kind, 3).excitations
        subset = [pool[i] for i in rng.choice(len(pool), size=min(8, len(pool)), replace=False)]
        for use_grid in (None, grid):
            analytic = screen_gradients(subset, state, ham, use_grid)
            for exc, g in zip(subset, analytic):
                if use_grid is None:
                    f = lambda t: expectation(ham, exc.apply(state, t))
                else:
                    f = lambda t: projected_expectation(ham, exc.apply(state, t), use_grid)[0]
                fd = central_difference(f, 0.0)
                if abs(fd) > 1e-6:
                    assert abs(g - fd) / abs(fd) < 1e-6, (kind, exc)
                else:
                    assert abs(g - fd) < 1e-9, (kind, exc)


def test_vqe_gradients_match_finite_differences(rng):
    # mixed ansatz drawing from every flavor, including the product-form
    # paired entries whose derivative needs the component-wise chain rule
    mi, _, ham, ref = _water_setup()
    paired = build_pool("fermionic-paired", 3).excitations
    spin = build_pool("fermionic-spin", 3).excitations
    qeb = build_pool("qeb", 3).excitations
    pauli = build_pool("qubit-pauli", 3).excitations
    multi = [e for e in paired if len(e.components) > 1]
    ansatz = [multi[0], spin[7], qeb[5], pauli[11], multi[3], pauli[40]]
    grid = make_projection_grid(0.0, n_orbitals=3, m=0.0)
    for use_grid in (None, grid):
        theta = rng.uniform(-0.7, 0.7, len(ansatz))
        _, analytic = _value_and_gradient(theta, ref, ansatz, ham, use_grid)

        def f(t):
            e, _ = _value_and_gradient(t, ref, ansatz, ham, use_grid)
            return e

        fd = gradient_by_differences(f, theta)
        for a, d in zip(analytic, fd):
            if abs(d) > 1e-6:
                assert abs(a - d) / abs(d) < 1e-6
            else:
                assert abs(a - d) < 1e-8


def test_vqe_minimize_never_regresses(rng):
    _, _, ham, ref = _water_setup()
    ops = build_pool("fermionic-spin", 3).excitations[:3]
    theta0 = rng.uniform(-0.3, 0.3, 3)
    e0, _ = _value_and_gradient(theta0, ref, ops, ham, None)
    thetas, energy, nit = vqe_minimize(ham, ref, ops, theta0)
    assert energy <= e0 + 1e-12
    # converged point has (near-)zero gradient
    _, g = _value_and_gradient(thetas, ref, ops, ham, None)
    assert np.max(np.abs(g)) < 1e-5


def test_select_operator_rules():
    grads = np.array([0.1, -0.9, 0.5, 0.9])
    # plain argmax on magnitude; exact tie resolves to the earlier entry
    assert select_operator(grads) == 1
    # repeating the previous pick falls to the runner-up
    assert select_operator(grads, previous=1) == 3
    assert select_operator(np.array([0.3]), previous=0) == 0  # nothing else to take


def test_adapt_reaches_fci_on_h2_for_every_pool():
    mi, constants = load_fixture("h2_0.74")
    ham = build_molecular_hamiltonian(mi)
    ref = basis_state(4, hf_occupation(1, 1))
    e_fci, v_fci = exact_ground_state(ham, 4, n_elec=2, sz=0.0)
    assert e_fci == pytest.approx(constants["fci_energy"], abs=1e-8)
    for kind in POOL_KINDS:
        pool = build_pool(kind, mi.n_orb)
        result = run_adapt(
            ham, pool, ref, fci_state=v_fci, fci_energy=e_fci, grad_norm_tol=1e-6
        )
        assert result.stopping_reason == "epsilon", kind
        assert abs(result.energy - e_fci) < 1e-7, kind
        assert result.final_fidelity > 1 - 1e-6, kind


def test_adapt_trajectory_bookkeeping():
    mi, constants, ham, ref = _water_setup()
    e_fci, v_fci = exact_ground_state(ham, 6, n_elec=4, sz=0.0)
    pool = build_pool("fermionic-spin", 3)
    result = run_adapt(
        ham, pool, ref, fci_state=v_fci, fci_energy=e_fci, grad_norm_tol=1e-4
    )
    rows = result.rows
    assert rows[0]["cycle"] == 0 and rows[0]["n_parameters"] == 0
    assert rows[0]["energy"] == pytest.approx(constants["hf_energy"], abs=1e-9)
    assert result.reference_energy == rows[0]["energy"]
    energies = [r["energy"] for r in rows]
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))
    from spinadapt.pools import cnot_cost

    for k, row in enumerate(rows):
        assert row["cycle"] == k
        assert row["n_parameters"] == k
        assert row["particles"] == pytest.approx(4.0, abs=1e-9)
        assert row["spin_z"] == pytest.approx(0.0, abs=1e-9)
        if k:
            picked = pool.excitations[row["op_index"]]
            assert row["op_label"] == picked.label()
            assert row["cnot_count"] - rows[k - 1]["cnot_count"] == cnot_cost(picked)
    assert result.energy == rows[-1]["energy"]
    assert result.cnot_count == rows[-1]["cnot_count"]
    assert len(result.op_indices) == len(rows) - 1
    # no immediate operator repeats, by selection rule
    picks = result.op_indices
    assert all(a != b for a, b in zip(picks, picks[1:]))
    summary = summary_dict(result)
    assert summary["converged"] is True
    assert summary["n_parameters"] == len(picks)
    assert summary["final_energy"] == result.energy
    assert summary["fci_energy"] == e_fci


def test_adapt_is_deterministic():
    _, _, ham, ref = _water_setup()
    pool = build_pool("qeb", 3)
    results = [
        run_adapt(ham, pool, ref, grad_norm_tol=1e-3, max_params=6) for _ in range(2)
    ]
    assert results[0].op_indices == results[1].op_indices
    assert np.array_equal(results[0].thetas, results[1].thetas)
    assert results[0].rows == results[1].rows


def test_adapt_stopping_reasons():
    _, _, ham, ref = _water_setup()
    pool = build_pool("fermionic-spin", 3)
    capped = run_adapt(ham, pool, ref, max_params=2, grad_norm_tol=1e-9)
    assert capped.stopping_reason == "max_params"
    assert len(capped.op_indices) == 2

    no_gates = run_adapt(ham, pool, ref, max_cnot=0, grad_norm_tol=1e-9)
    assert no_gates.stopping_reason == "max_cnot"
    assert no_gates.op_indices == [] and len(no_gates.rows) == 1
    assert no_gates.energy == no_gates.reference_energy

    budget = run_adapt(ham, pool, ref, max_cnot=40, grad_norm_tol=1e-9)
    assert budget.stopping_reason == "max_cnot"
    assert budget.cnot_count <= 40

    trivial = run_adapt(ham, pool, ref, grad_norm_tol=1e3)
    assert trivial.stopping_reason == "epsilon" and trivial.op_indices == []

    stalled = run_adapt(ham, pool, ref, grad_norm_tol=1e-9, max_cycles=1)
    assert stalled.stopping_reason == "error"
    assert len(stalled.op_indices) == 1


def test_projected_adapt_converges_and_stays_pure():
    mi, constants, ham, ref = _water_setup()
    e_fci, v_fci = exact_ground_state(ham, 6, n_elec=4, sz=0.0)
    grid = make_projection_grid(0.0, n_orbitals=3, m=0.0)
    pool = build_pool("fermionic-spin", 3)
    result = run_adapt(
        ham, pool, ref, grid=grid, fci_state=v_fci, fci_energy=e_fci, grad_norm_tol=1e-5
    )
    assert result.stopping_reason == "epsilon"
    assert abs(result.energy - e_fci) < 1e-7
    assert result.projected_state is not None
    assert np.linalg.norm(result.projected_state) == pytest.approx(1.0, abs=1e-10)
    for row in result.rows:
        assert row["spin_squared"] == pytest.approx(0.0, abs=1e-8)
    # the projected energy the loop reports equals the quadrature expectation
    energy, _ = projected_expectation(ham, result.state, grid)
    assert energy == pytest.approx(result.energy, abs=1e-10)


def test_trajectory_and_summary_files(tmp_path):
    _, _, ham, ref = _water_setup()
    pool = build_pool("fermionic-spin", 3)
    result = run_adapt(ham, pool, ref, max_params=3, grad_norm_tol=1e-9)
    csv_path = tmp_path / "trajectory.csv"
    write_trajectory(csv_path, result.rows)
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == TRAJECTORY_COLUMNS
    assert len(rows) == len(result.rows) + 1
    assert rows[1][TRAJECTORY_COLUMNS.index("op_index")] == ""  # reference row
    json_path = tmp_path / "summary.json"
    write_summary(json_path, result, extra={"note": 1})
    payload = json.loads(json_path.read_text())
    assert payload["stopping_reason"] == "max_params"
    assert payload["note"] == 1
    assert payload["n_parameters"] == 3


def test_uccsd_counts_and_h2_exactness():
    assert len(uccsd_excitations(4, [0, 1])) == 3
    ex = uccsd_excitations(8, [0, 1, 2, 3])
    assert len(ex) == 26
    assert sum(e.kind == "single" for e in ex) == 8
    # every entry conserves the spin label pattern
    for e in ex:
        comp = e.components[0]
        half = len(comp) // 2
        assert sum(q & 1 for q in comp[:half]) == sum(q & 1 for q in comp[half:])

    mi, constants = load_fixture("h2_0.74")
    ham = build_molecular_hamiltonian(mi)
    e_fci, v_fci = exact_ground_state(ham, 4, n_elec=2, sz=0.0)
    report = run_uccsd(ham, 4, hf_occupation(1, 1), fci_state=v_fci, fci_energy=e_fci)
    assert report["energy"] == pytest.approx(e_fci, abs=1e-8)
    assert report["fidelity"] > 1 - 1e-8
    assert report["n_parameters"] == 3
    assert report["cnot_count"] > 0
    assert report["energy_error"] == pytest.approx(0.0, abs=1e-8)
