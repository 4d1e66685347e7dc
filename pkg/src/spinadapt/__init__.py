"""Adaptive variational eigensolver engine with spin projection and
orbital-response properties, on a dense statevector backend."""

__version__ = "1.0.0"

from .adapt import run_adapt, run_uccsd, screen_gradients, select_operator, vqe_minimize
from .fermions import FermionOperator, PauliString, PauliSum, jordan_wigner, strip_z
from .hamiltonians import (
    build_hubbard,
    build_molecular_hamiltonian,
    build_spin_operators,
)
from .integrals import MolecularIntegrals, freeze_core, read_fcidump
from .pools import POOL_KINDS, Excitation, Pool, build_pool, cnot_cost, naive_cnot_cost
from .projection import make_projection_grid, wigner_small_d
from .response import dipole_moment, property_report, solve_response
from .statevector import basis_state, exact_ground_state, expectation, fidelity

__all__ = [
    "run_adapt",
    "run_uccsd",
    "screen_gradients",
    "select_operator",
    "vqe_minimize",
    "FermionOperator",
    "PauliString",
    "PauliSum",
    "jordan_wigner",
    "strip_z",
    "build_hubbard",
    "build_molecular_hamiltonian",
    "build_spin_operators",
    "MolecularIntegrals",
    "freeze_core",
    "read_fcidump",
    "POOL_KINDS",
    "Excitation",
    "Pool",
    "build_pool",
    "cnot_cost",
    "naive_cnot_cost",
    "make_projection_grid",
    "wigner_small_d",
    "dipole_moment",
    "property_report",
    "solve_response",
    "basis_state",
    "exact_ground_state",
    "expectation",
    "fidelity",
]
