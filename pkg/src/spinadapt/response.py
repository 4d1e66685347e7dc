"""First-order properties from variational states: orbital response and dipoles.

A converged variational state is stationary in its angles but not in the
orbitals, so expectation values of one-body operators miss the orbital
relaxation part of the true energy derivative.  The fix is the standard
Lagrangian construction: augment the energy with multipliers ``z`` on the
off-diagonal Fock conditions that define the canonical orbitals, choose ``z``
to cancel the energy's orbital gradient ``R``, and fold ``z`` into *relaxed*
density matrices whose contraction with property integrals gives exact
first derivatives.

Conventions (all in the spin-orbital basis of the fixture):

* ``R[p, q]`` is the derivative of the energy under the orbital rotation
  generated by ``a+_p a_q - a+_q a_p`` -- identical to the screening gradient
  of the corresponding single excitation; antisymmetric.
* Two-body density ``D2[p, q, r, s] = <a+_p a+_q a_s a_r>`` so the energy is
  ``sum(h * D1) + 1/4 * sum(v * D2)`` with ``v[p,q,r,s] = <pq||rs>``.
* Frozen orbitals are handled by assembling composite full-space densities
  (frozen block ideal, cross block factorized) and evaluating the same
  commutator contraction; this reproduces the closed-form frozen-block
  expressions and needs no qubit measurements outside the active space.
* With spin projection the densities are the half-projected
  ``<psi|...P|psi>/<psi|P|psi>`` consistent with the projected energy, and
  the active ``R`` block is the projected screening gradient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonians import build_molecular_hamiltonian
from .integrals import (
    DipoleIntegrals,
    MolecularIntegrals,
    freeze_core,
    hf_occupation,
    spin_orbital_antisymmetrized_eri,
    spin_orbital_oei,
)
from .pools import Excitation
from .projection import ProjectionGrid, apply_projector
from .statevector import ladder_transition, n_qubits_of

__all__ = [
    "ResponseSingularError",
    "ResponseSolution",
    "build_fock",
    "measure_rdms",
    "composite_rdms",
    "orbital_gradient_from_rdms",
    "screening_orbital_gradient",
    "fock_derivative_blocks",
    "solve_multipliers",
    "solve_response",
    "dipole_moment",
    "property_report",
]

DEGENERACY_TOL = 1e-8


class ResponseSingularError(ValueError):
    """The occupied-virtual response system is numerically singular."""

    def __init__(self, smallest_singular_value: float):
        self.smallest_singular_value = smallest_singular_value
        super().__init__(
            "response system is singular (smallest singular value "
            f"{smallest_singular_value:.3e}); orbitals are too degenerate"
        )


# ----------------------------------------------------------------------
# densities
# ----------------------------------------------------------------------
def measure_rdms(state: np.ndarray, grid: ProjectionGrid | None = None):
    """One- and two-body densities of ``state`` over its spin orbitals.

    With ``grid`` the half-projected densities ``<psi|... P|psi>/<psi|P|psi>``
    are returned; these are the ones whose contraction with the integrals
    reproduces the projected energy.
    """
    n = n_qubits_of(state)
    if grid is None:
        ket, norm = state, 1.0
    else:
        ket = apply_projector(state, grid)
        norm = complex(np.vdot(state, ket)).real
    d1 = np.zeros((n, n), dtype=complex)
    for p in range(n):
        for q in range(n):
            d1[p, q] = ladder_transition(state, ket, ((p, True), (q, False))) / norm
    d2 = np.zeros((n, n, n, n), dtype=complex)
    for p in range(n):
        for q in range(p):
            for r in range(n):
                for s in range(r):
                    val = (
                        ladder_transition(
                            state, ket, ((p, True), (q, True), (s, False), (r, False))
                        )
                        / norm
                    )
                    d2[p, q, r, s] = val
                    d2[q, p, r, s] = -val
                    d2[p, q, s, r] = -val
                    d2[q, p, s, r] = val
    return d1, d2


def composite_rdms(d1_active, d2_active, n_frozen_orbitals: int):
    """Embed active-space densities into the full space with an ideal core.

    The frozen core contributes an idempotent block and factorized
    core-active cross terms; everything else is the measured active density.
    """
    nf = 2 * n_frozen_orbitals
    na = d1_active.shape[0]
    n = nf + na
    g1 = np.zeros((n, n), dtype=complex)
    g1[:nf, :nf] = np.eye(nf)
    g1[nf:, nf:] = d1_active
    g2 = np.zeros((n, n, n, n), dtype=complex)
    for i in range(nf):
        for j in range(nf):
            if i != j:
                g2[i, j, i, j] += 1.0
                g2[i, j, j, i] -= 1.0
    for i in range(nf):
        g2[i, nf:, i, nf:] += d1_active
        g2[nf:, i, i, nf:] -= d1_active
        g2[i, nf:, nf:, i] -= d1_active
        g2[nf:, i, nf:, i] += d1_active
    g2[nf:, nf:, nf:, nf:] = d2_active
    return g1, g2


def rdm_energy(mi: MolecularIntegrals, g1, g2) -> float:
    """Recontract densities with the integrals: ``E = e0 + h.D1 + v.D2/4``."""
    h = spin_orbital_oei(mi.h)
    v = spin_orbital_antisymmetrized_eri(mi.eri)
    return float(
        (mi.e_core + np.einsum("pq,pq->", h, g1) + 0.25 * np.einsum("pqrs,pqrs->", v, g2)).real
    )


# ----------------------------------------------------------------------
# orbital gradient
# ----------------------------------------------------------------------
def orbital_gradient_from_rdms(h, v, g1, g2) -> np.ndarray:
    """``R[p,q] = <[H, a+_p a_q - a+_q a_p]>`` contracted from densities."""
    m1 = h @ g1 - g1 @ h
    t1 = 0.5 * np.einsum("pqcs,pqds->cd", v, g2)
    t2 = 0.5 * np.einsum("dqrs,cqrs->cd", v, g2)
    m2 = t1 - t2
    m = m1 + m2
    return np.real(m - m.T)


def screening_orbital_gradient(
    state: np.ndarray, hamiltonian, grid: ProjectionGrid | None = None
) -> np.ndarray:
    """Active-space ``R`` measured as single-excitation screening gradients."""
    from .adapt import screen_gradients

    n = n_qubits_of(state)
    pairs = [(p, q) for p in range(n) for q in range(p)]
    singles = [
        Excitation(flavor="fermionic", components=((p, q),), signs=(1,)) for p, q in pairs
    ]
    values = screen_gradients(singles, state, hamiltonian, grid)
    r = np.zeros((n, n))
    for (p, q), val in zip(pairs, values):
        r[p, q] = val
        r[q, p] = -val
    return r


# ----------------------------------------------------------------------
# Fock matrix and its orbital derivative
# ----------------------------------------------------------------------
def build_fock(mi: MolecularIntegrals) -> np.ndarray:
    """Spin-orbital Fock matrix ``h + sum_i <pi||qi>`` over occupied ``i``."""
    h = spin_orbital_oei(mi.h)
    v = spin_orbital_antisymmetrized_eri(mi.eri)
    occ = list(hf_occupation(mi.n_alpha, mi.n_beta))
    n = h.shape[0]
    return h + np.einsum("piqi->pq", v[np.ix_(range(n), occ, range(n), occ)])


@dataclass
class FockDerivativeBlocks:
    """Dense ``dF_pq/dkappa_rs`` blocks over (vir, occ) index lists."""

    occ: tuple
    vir: tuple
    vo_vo: np.ndarray  # [a, i, c, k]
    oo_vo: np.ndarray  # [i, j, c, k]
    vv_vo: np.ndarray  # [a, b, c, k]
    oo_oo: np.ndarray  # [i, j, k, l]
    vv_vv: np.ndarray  # [a, b, c, d]


def fock_derivative_blocks(fock: np.ndarray, v: np.ndarray, occ, vir) -> FockDerivativeBlocks:
    occ, vir = tuple(occ), tuple(vir)
    f = np.real(np.diag(fock))
    no, nv = len(occ), len(vir)
    o, vlist = list(occ), list(vir)

    vo_vo = (
        np.einsum("ac,ik->aick", np.eye(nv), np.eye(no))
        * (f[vlist][:, None, None, None] - f[o][None, :, None, None])
        + v[np.ix_(vlist, o, o, vlist)].transpose(0, 2, 3, 1)  # <ak||ic> -> [a,i,c,k]
        + v[np.ix_(vlist, vlist, o, o)].transpose(0, 2, 1, 3)  # <ac||ik> -> [a,i,c,k]
    )
    oo_vo = v[np.ix_(o, vlist, o, o)].transpose(0, 2, 1, 3) + v[
        np.ix_(o, o, o, vlist)
    ].transpose(0, 2, 3, 1)
    vv_vo = v[np.ix_(vlist, vlist, vlist, o)].transpose(0, 2, 1, 3) + v[
        np.ix_(vlist, o, vlist, vlist)
    ].transpose(0, 2, 3, 1)

    dident = lambda m: np.eye(m)
    df_o = f[o][:, None] - f[o][None, :]
    oo_oo = np.einsum("ij,ik,jl->ijkl", df_o, dident(no), dident(no)) - np.einsum(
        "ij,il,jk->ijkl", df_o, dident(no), dident(no)
    )
    df_v = f[vlist][:, None] - f[vlist][None, :]
    vv_vv = np.einsum("ab,ac,bd->abcd", df_v, dident(nv), dident(nv)) - np.einsum(
        "ab,ad,bc->abcd", df_v, dident(nv), dident(nv)
    )
    return FockDerivativeBlocks(occ, vir, vo_vo, oo_vo, vv_vo, oo_oo, vv_vv)


# ----------------------------------------------------------------------
# multipliers
# ----------------------------------------------------------------------
@dataclass
class ResponseSolution:
    occ: tuple
    vir: tuple
    fock: np.ndarray
    orbital_gradient: np.ndarray  # full antisymmetric R
    z: np.ndarray  # full antisymmetric multiplier matrix
    z_symmetric: np.ndarray  # symmetrized (lower triangle mirrored)
    residual: float
    bare_1rdm: np.ndarray
    bare_2rdm: np.ndarray
    relaxed_1rdm: np.ndarray
    relaxed_2rdm: np.ndarray
    energy: float
    energy_relaxed: float


def _closed_form_z(r_block, f_diag, pairs):
    """z_pq = -R_pq/(F_pp - F_qq) with the redundant-rotation guard."""
    z = {}
    for p, q in pairs:
        gap = f_diag[p] - f_diag[q]
        if abs(gap) < DEGENERACY_TOL:
            if abs(r_block[p, q]) < DEGENERACY_TOL:
                z[(p, q)] = 0.0
                continue
            raise ResponseSingularError(abs(gap))
        z[(p, q)] = -r_block[p, q] / gap
    return z


def solve_multipliers(r: np.ndarray, fock: np.ndarray, v: np.ndarray, occ, vir):
    """All multiplier blocks from the stationarity conditions.

    Occupied-occupied and virtual-virtual multipliers are closed-form ratios;
    the virtual-occupied block solves the dense linear system assembled from
    the Fock derivative, with corrections from the closed-form blocks folded
    into the right-hand side.  Returns ``(z_full, residual)``.
    """
    occ, vir = tuple(occ), tuple(vir)
    blocks = fock_derivative_blocks(fock, v, occ, vir)
    f_diag = np.real(np.diag(fock))
    n = fock.shape[0]

    z = np.zeros((n, n))
    occ_pairs = [(occ[x], occ[y]) for x in range(len(occ)) for y in range(x)]
    vir_pairs = [(vir[x], vir[y]) for x in range(len(vir)) for y in range(x)]
    z_oo = _closed_form_z(r, f_diag, occ_pairs)
    z_vv = _closed_form_z(r, f_diag, vir_pairs)
    for (p, q), val in {**z_oo, **z_vv}.items():
        z[p, q] = val
        z[q, p] = -val

    o_pos = {p: x for x, p in enumerate(occ)}
    v_pos = {p: x for x, p in enumerate(vir)}
    rhs = np.array([[r[c, k] for k in occ] for c in vir])  # [c, k]
    for (i, j), val in z_oo.items():
        if val:
            rhs += val * blocks.oo_vo[o_pos[i], o_pos[j]]
    for (a, b), val in z_vv.items():
        if val:
            rhs += val * blocks.vv_vo[v_pos[a], v_pos[b]]

    nv, no = len(vir), len(occ)
    # rows (c,k), columns (a,i):  sum_ai z_ai A[a,i,c,k] = -rhs[c,k]
    m = blocks.vo_vo.reshape(nv * no, nv * no).T
    smallest = np.linalg.svd(m, compute_uv=False)[-1] if m.size else 1.0
    if m.size and smallest < 1e-10 * max(1.0, np.max(np.abs(m))):
        raise ResponseSingularError(float(smallest))
    z_ai = np.linalg.solve(m, -rhs.reshape(nv * no)) if m.size else np.zeros(0)
    residual = float(np.max(np.abs(m @ z_ai + rhs.reshape(nv * no)))) if m.size else 0.0
    for x, a in enumerate(vir):
        for y, i in enumerate(occ):
            z[a, i] = z_ai[x * no + y]
            z[i, a] = -z[a, i]
    return z, residual


# ----------------------------------------------------------------------
# end-to-end solution
# ----------------------------------------------------------------------
def solve_response(
    mi_full: MolecularIntegrals,
    state: np.ndarray,
    *,
    n_frozen: int = 0,
    grid: ProjectionGrid | None = None,
) -> ResponseSolution:
    """Full response pipeline for a variational state in the active space.

    ``mi_full`` holds the integrals *before* freezing; ``state`` lives on the
    qubits of the active space left after freezing ``n_frozen`` lowest
    orbitals.  Returns multipliers and relaxed densities over the full space.
    """
    if n_frozen:
        mi_act = freeze_core(mi_full, n_frozen)
    else:
        mi_act = mi_full
    if n_qubits_of(state) != 2 * mi_act.n_orb:
        raise ValueError("state size does not match the active orbital count")

    d1_act, d2_act = measure_rdms(state, grid)
    g1, g2 = composite_rdms(d1_act, d2_act, n_frozen)

    h = spin_orbital_oei(mi_full.h)
    v = spin_orbital_antisymmetrized_eri(mi_full.eri)
    r = orbital_gradient_from_rdms(h, v, g1, g2)
    if grid is not None:
        # the projected screening gradient is the stated active-space R; the
        # commutator contraction stays for the frozen blocks
        h_act = build_molecular_hamiltonian(mi_act)
        r_act = screening_orbital_gradient(state, h_act, grid)
        nf = 2 * n_frozen
        r[nf:, nf:] = r_act

    fock = build_fock(mi_full)
    occ = hf_occupation(mi_full.n_alpha, mi_full.n_beta)
    vir = tuple(p for p in range(2 * mi_full.n_orb) if p not in set(occ))
    z, residual = solve_multipliers(r, fock, v, occ, vir)

    z_sym = np.tril(z, -1) + np.tril(z, -1).T
    relaxed_1 = g1 + 0.5 * z_sym
    occ_vec = np.zeros(2 * mi_full.n_orb)
    occ_vec[list(occ)] = 1.0
    d_hf = np.diag(occ_vec)
    corr = 0.5 * (
        np.einsum("pr,qs->pqrs", z_sym, d_hf)
        + np.einsum("qs,pr->pqrs", z_sym, d_hf)
        - np.einsum("qr,ps->pqrs", z_sym, d_hf)
        - np.einsum("ps,qr->pqrs", z_sym, d_hf)
    )
    relaxed_2 = g2 + corr

    energy = rdm_energy(mi_full, g1, g2)
    energy_relaxed = rdm_energy(mi_full, relaxed_1, relaxed_2)
    return ResponseSolution(
        occ=tuple(occ),
        vir=vir,
        fock=fock,
        orbital_gradient=r,
        z=z,
        z_symmetric=z_sym,
        residual=residual,
        bare_1rdm=g1,
        bare_2rdm=g2,
        relaxed_1rdm=relaxed_1,
        relaxed_2rdm=relaxed_2,
        energy=energy,
        energy_relaxed=energy_relaxed,
    )


# ----------------------------------------------------------------------
# properties
# ----------------------------------------------------------------------
def _spatial_trace(d1: np.ndarray) -> np.ndarray:
    return np.real(d1[0::2, 0::2] + d1[1::2, 1::2])


def dipole_moment(d1_spin: np.ndarray, dipoles: DipoleIntegrals) -> np.ndarray:
    """``mu_c = nuclear_c - sum_pq mu^c_pq D_pq`` (electrons count negative)."""
    d_spatial = _spatial_trace(d1_spin)
    if d_spatial.shape[0] != dipoles.components.shape[1]:
        raise ValueError("dipole integrals and density are over different orbital counts")
    electronic = np.einsum("cpq,pq->c", dipoles.components, d_spatial)
    return dipoles.nuclear - electronic


def property_report(
    mi_full: MolecularIntegrals,
    dipoles: DipoleIntegrals,
    state: np.ndarray,
    *,
    n_frozen: int = 0,
    grid: ProjectionGrid | None = None,
) -> dict:
    """JSON-ready report: unrelaxed and relaxed dipole plus solver diagnostics."""
    sol = solve_response(mi_full, state, n_frozen=n_frozen, grid=grid)
    mu_bare = dipole_moment(sol.bare_1rdm, dipoles)
    mu_relaxed = dipole_moment(sol.relaxed_1rdm, dipoles)
    return {
        "energy": sol.energy,
        "energy_relaxed_recontraction": sol.energy_relaxed,
        "dipole_unrelaxed": [float(x) for x in mu_bare],
        "dipole_relaxed": [float(x) for x in mu_relaxed],
        "orbital_gradient_norm": float(np.linalg.norm(sol.orbital_gradient)),
        "multiplier_norm": float(np.linalg.norm(sol.z)),
        "solver_residual": sol.residual,
        "n_frozen": n_frozen,
    }
