"""Qubit Hamiltonians and symmetry operators.

Molecular Hamiltonians are assembled in second quantization over interleaved
spin orbitals (alpha on even qubits, beta on odd) and mapped through
Jordan-Wigner:

    H = E_core + sum_PQ h_PQ a+_P a_Q
        + sum_{P>Q, R>S} <PQ||RS> a+_P a+_Q a_S a_R

with ``<PQ|RS> = (pr|qs)`` on matching spins.  The Fermi-Hubbard chain and
the total-spin/number operators are built the same way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fermions import FermionOperator, PauliSum, jordan_wigner, _reorder
from .integrals import (
    MolecularIntegrals,
    spin_orbital_antisymmetrized_eri,
    spin_orbital_oei,
)

__all__ = [
    "fermionic_molecular_hamiltonian",
    "build_molecular_hamiltonian",
    "fermionic_hubbard_hamiltonian",
    "build_hubbard",
    "SpinOperators",
    "build_spin_operators",
    "hubbard_localized_occupation",
]

_COEFF_TOL = 1e-12


def fermionic_molecular_hamiltonian(mi: MolecularIntegrals) -> FermionOperator:
    """Second-quantized molecular Hamiltonian as a :class:`FermionOperator`."""
    h_so = spin_orbital_oei(mi.h)
    g = spin_orbital_antisymmetrized_eri(mi.eri)
    m = 2 * mi.n_orb
    terms: dict[tuple, complex] = {}
    _reorder((), complex(mi.e_core), terms)
    for p in range(m):
        for q in range(m):
            if abs(h_so[p, q]) > _COEFF_TOL:
                _reorder(((p, True), (q, False)), complex(h_so[p, q]), terms)
    for p in range(m):
        for q in range(p):
            for r in range(m):
                for s in range(r):
                    v = g[p, q, r, s]
                    if abs(v) > _COEFF_TOL:
                        # <PQ||RS> a+_P a+_Q a_S a_R
                        _reorder(
                            ((p, True), (q, True), (s, False), (r, False)),
                            complex(v),
                            terms,
                        )
    return FermionOperator(terms).compress()


def build_molecular_hamiltonian(mi: MolecularIntegrals) -> PauliSum:
    """Jordan-Wigner image of :func:`fermionic_molecular_hamiltonian`."""
    return jordan_wigner(fermionic_molecular_hamiltonian(mi))


def fermionic_hubbard_hamiltonian(
    n_sites: int, t: float = 1.0, u: float = 8.0, periodic: bool = True
) -> FermionOperator:
    """Fermi-Hubbard chain: ``-t`` hopping plus on-site ``U n_up n_down``.

    Site ``i`` occupies qubits ``2i`` (up) and ``2i + 1`` (down); the chain
    closes on itself when ``periodic``.
    """
    if n_sites < 2:
        raise ValueError("need at least two sites")
    terms: dict[tuple, complex] = {}
    bonds = [(i, i + 1) for i in range(n_sites - 1)]
    if periodic and n_sites > 2:
        bonds.append((n_sites - 1, 0))
    for i, j in bonds:
        for spin in (0, 1):
            p, q = 2 * i + spin, 2 * j + spin
            _reorder(((p, True), (q, False)), complex(-t), terms)
            _reorder(((q, True), (p, False)), complex(-t), terms)
    for i in range(n_sites):
        up, dn = 2 * i, 2 * i + 1
        _reorder(((up, True), (up, False), (dn, True), (dn, False)), complex(u), terms)
    return FermionOperator(terms).compress()


def build_hubbard(n_sites: int, t: float = 1.0, u: float = 8.0, periodic: bool = True) -> PauliSum:
    return jordan_wigner(fermionic_hubbard_hamiltonian(n_sites, t, u, periodic))


def hubbard_localized_occupation(n_sites: int, n_elec: int) -> list[int]:
    """Doubly fill sites from the left (one leftover electron goes in spin up)."""
    if n_elec > 2 * n_sites:
        raise ValueError("more electrons than spin orbitals")
    occ = []
    for i in range(n_elec // 2):
        occ += [2 * i, 2 * i + 1]
    if n_elec % 2:
        occ.append(2 * (n_elec // 2))
    return occ


@dataclass(frozen=True)
class SpinOperators:
    """Jordan-Wigner images of S^2, S_z and the number operator."""

    s_squared: PauliSum
    s_z: PauliSum
    number: PauliSum


def build_spin_operators(n_orbitals: int) -> SpinOperators:
    """Total-spin and particle-number operators for ``n_orbitals`` orbitals.

    Uses ``S^2 = S_- S_+ + S_z (S_z + 1)`` with
    ``S_+ = sum_p a+_{p,up} a_{p,down}``.
    """
    s_plus = FermionOperator.zero()
    s_z = FermionOperator.zero()
    number = FermionOperator.zero()
    for p in range(n_orbitals):
        up, dn = 2 * p, 2 * p + 1
        s_plus = s_plus + FermionOperator.from_ladder(((up, True), (dn, False)))
        s_z = s_z + FermionOperator.from_ladder(((up, True), (up, False)), 0.5)
        s_z = s_z + FermionOperator.from_ladder(((dn, True), (dn, False)), -0.5)
        number = number + FermionOperator.from_ladder(((up, True), (up, False)))
        number = number + FermionOperator.from_ladder(((dn, True), (dn, False)))
    s_squared = s_plus.dagger() * s_plus + s_z * s_z + s_z
    return SpinOperators(
        jordan_wigner(s_squared), jordan_wigner(s_z), jordan_wigner(number)
    )
