"""Adaptive ansatz growth with optional spin projection.

Each cycle screens every pool entry by the energy derivative it would have
if appended with a zero angle, appends the entry with the largest magnitude
(preferring the runner-up when the leader was just added, and pool order on
exact ties), and re-optimizes all angles with BFGS using analytic gradients
from a reverse sweep over the circuit.

With a projection grid the objective becomes the spin-projected energy

    E = <psi| H P |psi> / <psi| P |psi>,

whose derivative with respect to any angle needs two fixed bra vectors --
``(H - E) P |psi>`` and ``P^dagger (H - E) |psi>`` -- transported backwards
through the circuit together with the ket.  The same two vectors drive the
screening, so screening and optimizer gradients agree exactly at zero angle.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .hamiltonians import build_spin_operators
from .pools import Excitation, Pool, cnot_cost
from .projection import ProjectionGrid, apply_projector, apply_projector_adjoint
from .statevector import (
    apply_pauli_sum,
    basis_state,
    excitation_transition,
    expectation,
    fidelity,
    n_qubits_of,
)

__all__ = [
    "screen_gradients",
    "select_operator",
    "vqe_minimize",
    "AdaptResult",
    "run_adapt",
    "TRAJECTORY_COLUMNS",
    "write_trajectory",
    "summary_dict",
    "write_summary",
    "uccsd_excitations",
    "run_uccsd",
]

log = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# screening and selection
# ----------------------------------------------------------------------
def screen_gradients(excitations, state, hamiltonian, grid: ProjectionGrid | None = None):
    """Energy derivative of appending each candidate at zero angle."""
    if grid is None:
        phi = apply_pauli_sum(hamiltonian, state)
        return np.array([2.0 * exc.transition(phi, state).real for exc in excitations])
    projected = apply_projector(state, grid)
    phi = apply_pauli_sum(hamiltonian, state)
    weight = complex(np.vdot(state, projected)).real
    energy = (complex(np.vdot(phi, projected)) / weight).real
    bra_ket_side = (apply_pauli_sum(hamiltonian, projected) - energy * projected) / weight
    bra_bra_side = (
        apply_projector_adjoint(phi, grid) - energy * apply_projector_adjoint(state, grid)
    ) / weight
    return np.array(
        [
            (exc.transition(bra_bra_side, state) + exc.transition(bra_ket_side, state)).real
            for exc in excitations
        ]
    )


def select_operator(gradients, previous: int = -1) -> int:
    """Largest |gradient| wins; repeat of ``previous`` falls to the runner-up;
    exact magnitude ties resolve to the earliest pool entry."""
    order = sorted(range(len(gradients)), key=lambda m: (-abs(gradients[m]), m))
    if order[0] == previous and len(order) > 1:
        return order[1]
    return order[0]


# ----------------------------------------------------------------------
# variational optimization
# ----------------------------------------------------------------------
def build_ansatz_state(reference, excitations, thetas):
    """Apply the excitation sequence to the reference state."""
    state = reference
    for exc, theta in zip(excitations, thetas):
        state = exc.apply(state, theta)
    return state


def _value_and_gradient(thetas, reference, excitations, hamiltonian, grid):
    state = build_ansatz_state(reference, excitations, thetas)
    n = len(excitations)
    grad = np.zeros(n)
    if grid is None:
        phi = apply_pauli_sum(hamiltonian, state)
        energy = complex(np.vdot(state, phi)).real
        vectors = [state, phi]
        for k in range(n - 1, -1, -1):
            (term,), vectors = _entry_derivative(excitations[k], thetas[k], vectors)
            grad[k] = 2.0 * term.real
        return energy, grad

    projected = apply_projector(state, grid)
    phi = apply_pauli_sum(hamiltonian, state)
    weight = complex(np.vdot(state, projected)).real
    energy = (complex(np.vdot(phi, projected)) / weight).real
    bra1 = (apply_pauli_sum(hamiltonian, projected) - energy * projected) / weight
    bra2 = (
        apply_projector_adjoint(phi, grid) - energy * apply_projector_adjoint(state, grid)
    ) / weight
    vectors = [state, bra1, bra2]
    for k in range(n - 1, -1, -1):
        terms, vectors = _entry_derivative(excitations[k], thetas[k], vectors)
        grad[k] = (terms[0] + terms[1]).real
    return energy, grad


def _entry_derivative(exc: Excitation, theta: float, vectors):
    """One reverse-sweep step: derivative terms for a shared-angle entry.

    ``vectors`` is ``[ket, bra, ...]``; the entry's rotation is peeled off
    every vector and ``<bra_i| dU/dtheta U^dag ... |ket>`` accumulates one
    term per bra.  Multi-component entries are products of component
    rotations, so the chain rule walks the components right-to-left --
    collapsing them into their summed generator would only be correct when
    the components commute.
    """
    ket, bras = vectors[0], vectors[1:]
    if exc.flavor == "pauli" or len(exc.components) == 1:
        terms = [exc.transition(b, ket) for b in bras]
        return terms, [exc.apply_inverse(v, theta) for v in vectors]
    fermionic = exc.flavor == "fermionic"
    terms = [0j] * len(bras)
    for comp, sign in reversed(tuple(zip(exc.components, exc.signs))):
        half = len(comp) // 2
        part = Excitation(flavor=exc.flavor, components=(comp,), signs=(1,))
        for i, b in enumerate(bras):
            terms[i] += sign * excitation_transition(
                b, ket, comp[:half], comp[half:], fermionic=fermionic
            )
        ket = part.apply(ket, -sign * theta)
        bras = [part.apply(b, -sign * theta) for b in bras]
    return terms, [ket, *bras]


def vqe_minimize(
    hamiltonian,
    reference,
    excitations,
    theta0,
    grid: ProjectionGrid | None = None,
    gtol: float = 1e-6,
    maxiter: int = 2000,
):
    """Minimize the (projected) energy over all angles with BFGS.

    Returns ``(thetas, energy, n_iterations)``; never worse than the start.
    """
    theta0 = np.asarray(theta0, dtype=float)
    if len(excitations) == 0:
        e0, _ = _value_and_gradient(theta0, reference, excitations, hamiltonian, grid)
        return theta0, e0, 0
    result = minimize(
        _value_and_gradient,
        theta0,
        args=(reference, excitations, hamiltonian, grid),
        method="BFGS",
        jac=True,
        options={"gtol": gtol, "maxiter": maxiter},
    )
    e0, _ = _value_and_gradient(theta0, reference, excitations, hamiltonian, grid)
    if result.fun > e0:
        return theta0, e0, int(result.nit)
    return result.x, float(result.fun), int(result.nit)


# ----------------------------------------------------------------------
# the adaptive loop
# ----------------------------------------------------------------------
TRAJECTORY_COLUMNS = (
    "cycle",
    "op_index",
    "op_label",
    "max_abs_gradient",
    "gradient_norm",
    "energy",
    "energy_error",
    "spin_squared",
    "spin_z",
    "particles",
    "fidelity",
    "n_parameters",
    "cnot_count",
    "vqe_iterations",
)


@dataclass
class AdaptResult:
    pool_kind: str
    n_qubits: int
    rows: list = field(default_factory=list)
    op_indices: list = field(default_factory=list)
    op_labels: list = field(default_factory=list)
    thetas: np.ndarray = None
    state: np.ndarray = None
    projected_state: np.ndarray = None
    energy: float = 0.0
    reference_energy: float = 0.0
    stopping_reason: str = ""
    cnot_count: int = 0
    max_abs_gradient_final: float = 0.0
    gradient_norm_final: float = 0.0
    fci_energy: float = None
    final_fidelity: float = None
    grid: ProjectionGrid = None


def _observed_state(state, grid):
    if grid is None:
        return state
    projected = apply_projector(state, grid)
    return projected / np.linalg.norm(projected)


def run_adapt(
    hamiltonian,
    pool: Pool,
    reference: np.ndarray,
    *,
    grid: ProjectionGrid | None = None,
    fci_state: np.ndarray = None,
    fci_energy: float = None,
    grad_norm_tol: float = 1e-3,
    max_params: int = None,
    max_cnot: int = None,
    max_cycles: int = 500,
    gtol: float = None,
    maxiter: int = 2000,
) -> AdaptResult:
    """Grow the ansatz until the screening-gradient norm, a parameter cap,
    or a CNOT budget stops it.  Records one trajectory row per cycle.

    ``gtol`` (inner optimizer) defaults to a hundredth of ``grad_norm_tol``
    so the screening norm can actually reach the requested threshold."""
    n_qubits = n_qubits_of(reference)
    spin_ops = build_spin_operators(n_qubits // 2)
    excitations = list(pool)
    if gtol is None:
        gtol = min(1e-6, 1e-2 * grad_norm_tol)

    def observables(state):
        watched = _observed_state(state, grid)
        row = {
            "spin_squared": expectation(spin_ops.s_squared, watched),
            "spin_z": expectation(spin_ops.s_z, watched),
            "particles": expectation(spin_ops.number, watched),
            "fidelity": fidelity(fci_state, watched) if fci_state is not None else None,
        }
        return watched, row

    state = reference.copy()
    thetas = np.zeros(0)
    chosen: list[int] = []
    cnots = 0
    previous = -1

    e_ref, _ = _value_and_gradient(thetas, reference, [], hamiltonian, grid)
    watched, obs = observables(state)
    rows = [
        {
            "cycle": 0,
            "op_index": None,
            "op_label": None,
            "max_abs_gradient": None,
            "gradient_norm": None,
            "energy": e_ref,
            "energy_error": None if fci_energy is None else e_ref - fci_energy,
            "n_parameters": 0,
            "cnot_count": 0,
            "vqe_iterations": None,
            **obs,
        }
    ]
    energy = e_ref
    stopping = "error"  # cycle safety cap; not user-requested
    gradients = np.zeros(len(excitations))

    for cycle in range(1, max_cycles + 1):
        gradients = screen_gradients(excitations, state, hamiltonian, grid)
        gnorm = float(np.linalg.norm(gradients))
        gmax = float(np.max(np.abs(gradients))) if len(gradients) else 0.0
        if gnorm < grad_norm_tol:
            stopping = "epsilon"
            break
        if max_params is not None and len(chosen) >= max_params:
            stopping = "max_params"
            break
        pick = select_operator(gradients, previous)
        cost = cnot_cost(excitations[pick])
        if max_cnot is not None and cnots + cost > max_cnot:
            stopping = "max_cnot"
            break

        chosen.append(pick)
        cnots += cost
        thetas = np.append(thetas, 0.0)
        ops = [excitations[i] for i in chosen]
        thetas, energy, nit = vqe_minimize(
            hamiltonian, reference, ops, thetas, grid=grid, gtol=gtol, maxiter=maxiter
        )
        state = build_ansatz_state(reference, ops, thetas)
        watched, obs = observables(state)
        rows.append(
            {
                "cycle": cycle,
                "op_index": pick,
                "op_label": excitations[pick].label(),
                "max_abs_gradient": gmax,
                "gradient_norm": gnorm,
                "energy": energy,
                "energy_error": None if fci_energy is None else energy - fci_energy,
                "n_parameters": len(chosen),
                "cnot_count": cnots,
                "vqe_iterations": nit,
                **obs,
            }
        )
        previous = pick
        log.info(
            "cycle %d: op %d (%s) |g|max=%.3e |g|=%.3e E=%.10f cnots=%d",
            cycle, pick, excitations[pick].label(), gmax, gnorm, energy, cnots,
        )

    return AdaptResult(
        pool_kind=pool.kind,
        n_qubits=n_qubits,
        rows=rows,
        op_indices=chosen,
        op_labels=[excitations[i].label() for i in chosen],
        thetas=thetas,
        state=state,
        projected_state=None if grid is None else watched,
        energy=energy,
        reference_energy=e_ref,
        stopping_reason=stopping,
        cnot_count=cnots,
        max_abs_gradient_final=float(np.max(np.abs(gradients))) if len(gradients) else 0.0,
        gradient_norm_final=float(np.linalg.norm(gradients)),
        fci_energy=fci_energy,
        final_fidelity=rows[-1]["fidelity"],
        grid=grid,
    )


# ----------------------------------------------------------------------
# reporting
# ----------------------------------------------------------------------
def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.12e" % value
    return str(value)


def write_trajectory(path, rows) -> None:
    """Write trajectory rows as CSV (fixed columns, deterministic bytes)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in TRAJECTORY_COLUMNS])


def summary_dict(result: AdaptResult) -> dict:
    return {
        "pool": result.pool_kind,
        "n_qubits": result.n_qubits,
        "projection": None
        if result.grid is None
        else {
            "spin": result.grid.spin,
            "m": result.grid.m,
            "n_points": result.grid.n_points,
        },
        "stopping_reason": result.stopping_reason,
        "converged": result.stopping_reason == "epsilon",
        "final_spin_squared": result.rows[-1]["spin_squared"],
        "final_spin_z": result.rows[-1]["spin_z"],
        "final_particles": result.rows[-1]["particles"],
        "n_cycles": len(result.op_indices),
        "n_parameters": len(result.op_indices),
        "cnot_count": result.cnot_count,
        "reference_energy": result.reference_energy,
        "final_energy": result.energy,
        "fci_energy": result.fci_energy,
        "final_energy_error": None
        if result.fci_energy is None
        else result.energy - result.fci_energy,
        "final_fidelity": result.final_fidelity,
        "max_abs_gradient_final": result.max_abs_gradient_final,
        "gradient_norm_final": result.gradient_norm_final,
        "operator_indices": list(result.op_indices),
        "operator_labels": list(result.op_labels),
        "thetas": [float(t) for t in (result.thetas if result.thetas is not None else [])],
    }


def write_summary(path, result: AdaptResult, extra: dict = None) -> None:
    payload = summary_dict(result)
    if extra:
        payload.update(extra)
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


# ----------------------------------------------------------------------
# fixed-ansatz baseline
# ----------------------------------------------------------------------
def uccsd_excitations(n_qubits: int, occupied) -> list[Excitation]:
    """Spin-conserving occupied->virtual singles and doubles, sorted."""
    occ = sorted(occupied)
    vir = [q for q in range(n_qubits) if q not in set(occ)]
    singles = sorted(
        (a, i) for i in occ for a in vir if (a & 1) == (i & 1)
    )
    doubles = []
    for x, i in enumerate(occ):
        for j in occ[x + 1 :]:
            for y, a in enumerate(vir):
                for b in vir[y + 1 :]:
                    if (a & 1) + (b & 1) == (i & 1) + (j & 1):
                        doubles.append((b, a, j, i))
    doubles.sort()
    return [Excitation(flavor="fermionic", components=(c,), signs=(1,)) for c in singles] + [
        Excitation(flavor="fermionic", components=(c,), signs=(1,)) for c in doubles
    ]


def run_uccsd(
    hamiltonian,
    n_qubits: int,
    occupied,
    *,
    fci_state=None,
    fci_energy=None,
    gtol: float = 1e-6,
    maxiter: int = 5000,
    amplitude_tol: float = 1e-8,
):
    """One-shot variational optimization of the full single-double ansatz.

    CNOTs are counted only for angles that end up above ``amplitude_tol``.
    """
    reference = basis_state(n_qubits, occupied)
    excitations = uccsd_excitations(n_qubits, occupied)
    thetas, energy, nit = vqe_minimize(
        hamiltonian, reference, excitations, np.zeros(len(excitations)),
        gtol=gtol, maxiter=maxiter,
    )
    state = build_ansatz_state(reference, excitations, thetas)
    active = [abs(t) > amplitude_tol for t in thetas]
    cnots = sum(cnot_cost(e) for e, keep in zip(excitations, active) if keep)
    return {
        "energy": float(energy),
        "n_parameters": len(excitations),
        "n_active_parameters": int(sum(active)),
        "cnot_count": int(cnots),
        "vqe_iterations": nit,
        "thetas": thetas,
        "state": state,
        "fci_energy": fci_energy,
        "energy_error": None if fci_energy is None else float(energy - fci_energy),
        "fidelity": None if fci_state is None else fidelity(fci_state, state),
    }
