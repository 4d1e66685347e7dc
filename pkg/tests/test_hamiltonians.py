"""Molecular and Hubbard Hamiltonians plus the spin/number observables.

Reference energies for the Hubbard cases are textbook closed forms
(dimer ground state, U=0 tight-binding shell filling), so they are
independent of everything in the package.
"""

import math

import numpy as np
import pytest

from conftest import load_fixture
from spinadapt.fermions import jordan_wigner
from spinadapt.hamiltonians import (
    build_hubbard,
    build_molecular_hamiltonian,
    build_spin_operators,
    fermionic_molecular_hamiltonian,
    hubbard_localized_occupation,
)
from spinadapt.oracles import dense_pauli_matrix
from spinadapt.statevector import basis_state, exact_ground_state, expectation

U = 8.0


def test_molecular_hamiltonian_is_hermitian_and_matches_fermionic_route():
    mi, _ = load_fixture("h2_0.74")
    qubit_ham = build_molecular_hamiltonian(mi)
    assert qubit_ham.is_hermitian()
    via_ladder = jordan_wigner(fermionic_molecular_hamiltonian(mi))
    a = dense_pauli_matrix(qubit_ham, 4)
    b = dense_pauli_matrix(via_ladder, 4)
    assert np.allclose(a, b, atol=1e-12)


def test_molecular_hamiltonian_commutes_with_symmetries():
    mi, _ = load_fixture("water_like")
    n = 2 * mi.n_orb
    h = dense_pauli_matrix(build_molecular_hamiltonian(mi), n)
    ops = build_spin_operators(mi.n_orb)
    for observable in (ops.s_squared, ops.s_z, ops.number):
        m = dense_pauli_matrix(observable, n)
        assert np.max(np.abs(h @ m - m @ h)) < 1e-10


def test_hubbard_dimer_ground_state():
    # half-filled two-site model: E0 = U/2 - sqrt((U/2)^2 + 4 t^2)
    ham = build_hubbard(2, t=1.0, u=U, periodic=False)
    e0, _ = exact_ground_state(ham, 4, n_elec=2, sz=0.0)
    assert e0 == pytest.approx(U / 2 - math.sqrt((U / 2) ** 2 + 4.0), abs=1e-10)


def test_hubbard_atomic_limit():
    ham = build_hubbard(3, t=0.0, u=U, periodic=False)
    mat = dense_pauli_matrix(ham, 6)
    assert np.allclose(mat, np.diag(np.diag(mat)), atol=1e-12)
    # energy counts U per doubly occupied site
    singly = basis_state(6, [0, 3])  # site 0 up, site 1 down
    doubly = basis_state(6, [0, 1])  # site 0 up+down
    assert expectation(ham, singly) == pytest.approx(0.0, abs=1e-12)
    assert expectation(ham, doubly) == pytest.approx(U, abs=1e-12)


def test_hubbard_tight_binding_fillings():
    # U=0 periodic ring: one-particle levels -2t cos(2 pi k / L)
    e0, _ = exact_ground_state(build_hubbard(6, t=1.0, u=0.0), 12, n_elec=6, sz=0.0)
    assert e0 == pytest.approx(2 * (-2.0) + 4 * (-1.0), abs=1e-9)
    # U=0 open 4-site chain: levels -(sqrt(5)+1)/2, -(sqrt(5)-1)/2, ...
    e0, _ = exact_ground_state(
        build_hubbard(4, t=1.0, u=0.0, periodic=False), 8, n_elec=4, sz=0.0
    )
    assert e0 == pytest.approx(-2.0 * math.sqrt(5.0), abs=1e-10)


def test_hubbard_periodic_flag_adds_the_closing_bond():
    ring = dense_pauli_matrix(build_hubbard(4, t=1.0, u=0.0), 8)
    chain = dense_pauli_matrix(build_hubbard(4, t=1.0, u=0.0, periodic=False), 8)
    assert np.max(np.abs(ring - chain)) > 0.1
    assert build_hubbard(4).is_hermitian()


def test_spin_operators_on_hand_built_states():
    ops = build_spin_operators(2)
    n = 4
    paired = basis_state(n, [0, 1])  # one orbital doubly occupied
    up_up = basis_state(n, [0, 2])  # two parallel alphas
    up_dn = basis_state(n, [0, 3])  # open-shell up/down determinant
    assert expectation(ops.s_squared, paired) == pytest.approx(0.0, abs=1e-12)
    assert expectation(ops.s_squared, up_up) == pytest.approx(2.0, abs=1e-12)
    # m=0 triplet/singlet combinations of the open-shell determinants
    other = basis_state(n, [1, 2])
    triplet = (up_dn + other) / np.sqrt(2)
    singlet = (up_dn - other) / np.sqrt(2)
    assert expectation(ops.s_squared, triplet) == pytest.approx(2.0, abs=1e-12)
    assert expectation(ops.s_squared, singlet) == pytest.approx(0.0, abs=1e-12)
    assert expectation(ops.s_z, up_up) == pytest.approx(1.0, abs=1e-12)
    assert expectation(ops.s_z, up_dn) == pytest.approx(0.0, abs=1e-12)
    assert expectation(ops.number, up_up) == pytest.approx(2.0, abs=1e-12)


def test_spin_squared_spectrum():
    # eigenvalues of S^2 on two orbitals are s(s+1) for s in {0, 1/2, 1}
    mat = dense_pauli_matrix(build_spin_operators(2).s_squared, 4)
    vals = np.unique(np.round(np.linalg.eigvalsh(mat), 9))
    assert np.allclose(vals, [0.0, 0.75, 2.0], atol=1e-9)


def test_hubbard_localized_occupation():
    occ = hubbard_localized_occupation(6, 6)
    assert sorted(occ) == [0, 1, 2, 3, 4, 5]  # three doubly occupied sites
    state = basis_state(12, occ)
    ops = build_spin_operators(6)
    assert expectation(ops.number, state) == pytest.approx(6.0)
    assert expectation(ops.s_z, state) == pytest.approx(0.0)
    assert expectation(ops.s_squared, state) == pytest.approx(0.0)
    # it really is the fully stacked configuration: costs U per pair
    ham = build_hubbard(6, t=1.0, u=U)
    assert expectation(ham, state) == pytest.approx(3 * U, abs=1e-12)
    with pytest.raises(ValueError):
        hubbard_localized_occupation(3, 7)
