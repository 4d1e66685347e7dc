#!/usr/bin/env python3
"""Generate the checked-in molecular fixtures (FCIDUMP/DIPOLES/constants).

The package itself never computes Gaussian integrals -- it ingests files.
This one-shot script is how those files were produced: a minimal STO-3G
restricted-Hartree-Fock pipeline (McMurchie-Davidson integrals, DIIS SCF,
MO transformation) whose output is validated in-place against published
integral and energy anchors for H2 before anything is written.

Usage:
    python3 scripts/make_fixtures.py [--out fixtures] [--ozone]

``--ozone`` additionally generates the 18-qubit ozone CAS(12,9) fixture,
which is slow and excluded from the default test suite.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys

import numpy as np
from scipy.special import hyp1f1

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from spinadapt.hamiltonians import build_molecular_hamiltonian
from spinadapt.integrals import (
    DipoleIntegrals,
    MolecularIntegrals,
    freeze_core,
    hf_energy,
    hf_occupation,
    write_fcidump,
    write_property_integrals,
)
from spinadapt.statevector import basis_state, exact_ground_state, fidelity

ANGSTROM = 1.0 / 0.529177210903  # bohr per angstrom

# ----------------------------------------------------------------------
# STO-3G contractions (exponent / coefficient tables, normalized primitives)
# ----------------------------------------------------------------------
_S_COEFFS_1S = (0.15432897, 0.53532814, 0.44463454)
_S_COEFFS_2S = (-0.09996723, 0.39951283, 0.70011547)
_P_COEFFS_2P = (0.15591627, 0.60768372, 0.39195739)

STO3G = {
    "H": [("s", (3.42525091, 0.62391373, 0.16885540), _S_COEFFS_1S)],
    "He": [("s", (6.36242139, 1.15892300, 0.31364979), _S_COEFFS_1S)],
    "N": [
        ("s", (99.1061690, 18.0523120, 4.8856602), _S_COEFFS_1S),
        ("s", (3.7804559, 0.8784966, 0.2857144), _S_COEFFS_2S),
        ("p", (3.7804559, 0.8784966, 0.2857144), _P_COEFFS_2P),
    ],
    "O": [
        ("s", (130.7093200, 23.8088610, 6.4436083), _S_COEFFS_1S),
        ("s", (5.0331513, 1.1695961, 0.3803890), _S_COEFFS_2S),
        ("p", (5.0331513, 1.1695961, 0.3803890), _P_COEFFS_2P),
    ],
}

CHARGE = {"H": 1, "He": 2, "N": 7, "O": 8}


class BasisFunction:
    """One contracted Cartesian Gaussian: sum_k c_k N_k x^l y^m z^n e^{-a_k r^2}."""

    def __init__(self, center, lmn, exps, coeffs):
        self.center = np.asarray(center, dtype=float)
        self.lmn = tuple(lmn)
        self.exps = np.asarray(exps, dtype=float)
        l, m, n = lmn
        norms = (
            (2 * self.exps / np.pi) ** 0.75
            * (4 * self.exps) ** ((l + m + n) / 2.0)
            / math.sqrt(_df(2 * l - 1) * _df(2 * m - 1) * _df(2 * n - 1))
        )
        self.coeffs = np.asarray(coeffs, dtype=float) * norms
        # renormalize the contraction so <g|g> = 1 exactly
        self.coeffs /= math.sqrt(_contracted_overlap(self, self))


def _df(n: int) -> int:
    """Double factorial with (-1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def build_basis(atoms):
    """atoms: list of (symbol, xyz-in-bohr).  Returns basis list."""
    basis = []
    for sym, xyz in atoms:
        for shell, exps, coeffs in STO3G[sym]:
            if shell == "s":
                basis.append(BasisFunction(xyz, (0, 0, 0), exps, coeffs))
            else:
                for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    basis.append(BasisFunction(xyz, lmn, exps, coeffs))
    return basis


# ----------------------------------------------------------------------
# McMurchie-Davidson primitives
# ----------------------------------------------------------------------
def _e_coeff(i, j, t, q_x, a, b):
    """Hermite expansion coefficient E_t^{ij} for a 1D Gaussian product."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-mu * q_x * q_x)
    if j == 0:
        return (
            _e_coeff(i - 1, j, t - 1, q_x, a, b) / (2 * p)
            - (mu * q_x / a) * _e_coeff(i - 1, j, t, q_x, a, b)
            + (t + 1) * _e_coeff(i - 1, j, t + 1, q_x, a, b)
        )
    return (
        _e_coeff(i, j - 1, t - 1, q_x, a, b) / (2 * p)
        + (mu * q_x / b) * _e_coeff(i, j - 1, t, q_x, a, b)
        + (t + 1) * _e_coeff(i, j - 1, t + 1, q_x, a, b)
    )


def _overlap_prim(a, lmn1, ra, b, lmn2, rb):
    p = a + b
    pref = (math.pi / p) ** 1.5
    s = pref
    for ax in range(3):
        s *= _e_coeff(lmn1[ax], lmn2[ax], 0, ra[ax] - rb[ax], a, b)
    return s


def _contracted_overlap(g1, g2):
    total = 0.0
    for a, ca in zip(g1.exps, g1.coeffs):
        for b, cb in zip(g2.exps, g2.coeffs):
            total += ca * cb * _overlap_prim(a, g1.lmn, g1.center, b, g2.lmn, g2.center)
    return total


def _kinetic_prim(a, lmn1, ra, b, lmn2, rb):
    """<a| -1/2 nabla^2 |b> via angular-momentum shifts on the ket."""
    l2 = list(lmn2)
    term = 0.0
    for ax in range(3):
        up = l2.copy()
        up[ax] += 2
        down = l2.copy()
        down[ax] -= 2
        j = l2[ax]
        part = -2.0 * b * b * _overlap_prim(a, lmn1, ra, b, tuple(up), rb)
        part += b * (2 * j + 1) * _overlap_prim(a, lmn1, ra, b, tuple(l2), rb)
        if j >= 2:
            part -= 0.5 * j * (j - 1) * _overlap_prim(a, lmn1, ra, b, tuple(down), rb)
        term += part
    return term


def _boys(n_max, t):
    """Boys functions F_0..F_n via the confluent hypergeometric identity."""
    return np.array([hyp1f1(n + 0.5, n + 1.5, -t) / (2 * n + 1) for n in range(n_max + 1)])


def _hermite_coulomb(t_max, u_max, v_max, p, rpc):
    """Table R_{tuv} = (d/dx)^t (d/dy)^u (d/dz)^v F_0-kernel at P - C."""
    n_max = t_max + u_max + v_max
    t_val = p * float(np.dot(rpc, rpc))
    boys = _boys(n_max, t_val)
    # R^n_{000} = (-2p)^n F_n
    table = {}
    for n in range(n_max + 1):
        table[(n, 0, 0, 0)] = (-2.0 * p) ** n * boys[n]

    def get(n, t, u, v):
        if t < 0 or u < 0 or v < 0:
            return 0.0
        key = (n, t, u, v)
        if key in table:
            return table[key]
        if t >= 1:
            val = (t - 1) * get(n + 1, t - 2, u, v) + rpc[0] * get(n + 1, t - 1, u, v)
        elif u >= 1:
            val = (u - 1) * get(n + 1, t, u - 2, v) + rpc[1] * get(n + 1, t, u - 1, v)
        else:
            val = (v - 1) * get(n + 1, t, u, v - 2) + rpc[2] * get(n + 1, t, u, v - 1)
        table[key] = val
        return val

    out = np.zeros((t_max + 1, u_max + 1, v_max + 1))
    for t in range(t_max + 1):
        for u in range(u_max + 1):
            for v in range(v_max + 1):
                out[t, u, v] = get(0, t, u, v)
    return out


def _nuclear_prim(a, lmn1, ra, b, lmn2, rb, rc):
    p = a + b
    rp = (a * ra + b * rb) / p
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    ex = [_e_coeff(l1, l2, t, ra[0] - rb[0], a, b) for t in range(l1 + l2 + 1)]
    ey = [_e_coeff(m1, m2, u, ra[1] - rb[1], a, b) for u in range(m1 + m2 + 1)]
    ez = [_e_coeff(n1, n2, v, ra[2] - rb[2], a, b) for v in range(n1 + n2 + 1)]
    r = _hermite_coulomb(l1 + l2, m1 + m2, n1 + n2, p, rp - np.asarray(rc))
    total = 0.0
    for t, cx in enumerate(ex):
        for u, cy in enumerate(ey):
            for v, cz in enumerate(ez):
                total += cx * cy * cz * r[t, u, v]
    return 2.0 * math.pi / p * total


def _dipole_prim(a, lmn1, ra, b, lmn2, rb, axis):
    """<a| r_axis |b> about the origin: raise l on the ket, shift by B."""
    up = list(lmn2)
    up[axis] += 1
    return _overlap_prim(a, lmn1, ra, b, tuple(up), rb) + rb[axis] * _overlap_prim(
        a, lmn1, ra, b, lmn2, rb
    )


def _eri_prim(a, lmn1, ra, b, lmn2, rb, c, lmn3, rc, d, lmn4, rd):
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    l3, m3, n3 = lmn3
    l4, m4, n4 = lmn4
    e1x = [_e_coeff(l1, l2, t, ra[0] - rb[0], a, b) for t in range(l1 + l2 + 1)]
    e1y = [_e_coeff(m1, m2, u, ra[1] - rb[1], a, b) for u in range(m1 + m2 + 1)]
    e1z = [_e_coeff(n1, n2, v, ra[2] - rb[2], a, b) for v in range(n1 + n2 + 1)]
    e2x = [_e_coeff(l3, l4, t, rc[0] - rd[0], c, d) for t in range(l3 + l4 + 1)]
    e2y = [_e_coeff(m3, m4, u, rc[1] - rd[1], c, d) for u in range(m3 + m4 + 1)]
    e2z = [_e_coeff(n3, n4, v, rc[2] - rd[2], c, d) for v in range(n3 + n4 + 1)]
    r = _hermite_coulomb(
        l1 + l2 + l3 + l4, m1 + m2 + m3 + m4, n1 + n2 + n3 + n4, alpha, rp - rq
    )
    total = 0.0
    for t, c1x in enumerate(e1x):
        for u, c1y in enumerate(e1y):
            for v, c1z in enumerate(e1z):
                inner = 0.0
                for tp, c2x in enumerate(e2x):
                    for up_, c2y in enumerate(e2y):
                        for vp, c2z in enumerate(e2z):
                            inner += (
                                c2x
                                * c2y
                                * c2z
                                * (-1.0) ** (tp + up_ + vp)
                                * r[t + tp, u + up_, v + vp]
                            )
                total += c1x * c1y * c1z * inner
    return 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q)) * total


def _contract2(basis, prim_fn):
    n = len(basis)
    out = np.zeros((n, n))
    for i in range(n):
        gi = basis[i]
        for j in range(i + 1):
            gj = basis[j]
            total = 0.0
            for a, ca in zip(gi.exps, gi.coeffs):
                for b, cb in zip(gj.exps, gj.coeffs):
                    total += ca * cb * prim_fn(a, gi.lmn, gi.center, b, gj.lmn, gj.center)
            out[i, j] = out[j, i] = total
    return out


def integrals_ao(atoms):
    """All STO-3G AO integrals for a geometry (bohr): S, T, V, dipole, ERI."""
    basis = build_basis(atoms)
    n = len(basis)
    s = _contract2(basis, _overlap_prim)
    t = _contract2(basis, _kinetic_prim)
    v = np.zeros((n, n))
    for sym, xyz in atoms:
        z = CHARGE[sym]
        v -= z * _contract2(
            basis, lambda a, l1, ra, b, l2, rb: _nuclear_prim(a, l1, ra, b, l2, rb, xyz)
        )
    dip = np.zeros((3, n, n))
    for axis in range(3):
        dip[axis] = _contract2(
            basis, lambda a, l1, ra, b, l2, rb: _dipole_prim(a, l1, ra, b, l2, rb, axis)
        )

    eri = np.zeros((n, n, n, n))
    pair_list = [(i, j) for i in range(n) for j in range(i + 1)]
    for idx_ij, (i, j) in enumerate(pair_list):
        for i2, j2 in pair_list[: idx_ij + 1]:
            gi, gj, gk, gl = basis[i], basis[j], basis[i2], basis[j2]
            total = 0.0
            for a, ca in zip(gi.exps, gi.coeffs):
                for b, cb in zip(gj.exps, gj.coeffs):
                    for c, cc in zip(gk.exps, gk.coeffs):
                        for d, cd in zip(gl.exps, gl.coeffs):
                            total += ca * cb * cc * cd * _eri_prim(
                                a, gi.lmn, gi.center, b, gj.lmn, gj.center,
                                c, gk.lmn, gk.center, d, gl.lmn, gl.center,
                            )
            for p, q in ((i, j), (j, i)):
                for r, s2 in ((i2, j2), (j2, i2)):
                    eri[p, q, r, s2] = eri[r, s2, p, q] = total

    e_nuc = 0.0
    for (s1, r1), (s2, r2) in itertools.combinations(atoms, 2):
        e_nuc += CHARGE[s1] * CHARGE[s2] / float(np.linalg.norm(np.asarray(r1) - np.asarray(r2)))
    nuc_dip = np.zeros(3)
    for sym, xyz in atoms:
        nuc_dip += CHARGE[sym] * np.asarray(xyz, dtype=float)
    return {"s": s, "t": t, "v": v, "dip": dip, "eri": eri, "e_nuc": e_nuc, "nuc_dip": nuc_dip}


# ----------------------------------------------------------------------
# restricted Hartree-Fock (DIIS)
# ----------------------------------------------------------------------
def run_rhf(ao, n_elec, max_iter=300, conv=1e-11, n_damped=10, damp=0.5, dm0=None):
    """RHF with a Hückel-type guess, damped warm-up and DIIS endgame.

    DIIS only starts after the damped iterations; extrapolating from the raw
    first iterates can converge to an excited SCF stationary point (N2 does
    exactly that from a bare core guess).

    ``dm0`` seeds the first Fock build with a known density instead of the
    Hückel guess, which is how a stretched geometry is kept on the SCF branch
    continued from a shorter bond length.
    """
    s, hcore, eri = ao["s"], ao["t"] + ao["v"], ao["eri"]
    n = s.shape[0]
    n_occ = n_elec // 2
    if n_elec % 2:
        raise ValueError("RHF needs an even electron count")
    w, u = np.linalg.eigh(s)
    x = u @ np.diag(w ** -0.5) @ u.T

    def fock_of(dm):
        j = np.einsum("pqrs,rs->pq", eri, dm)
        k = np.einsum("prqs,rs->pq", eri, dm)
        return hcore + j - 0.5 * k

    if dm0 is None:
        f = 0.875 * s * (np.diag(hcore)[:, None] + np.diag(hcore)[None, :])
        np.fill_diagonal(f, np.diag(hcore))
    else:
        f = fock_of(dm0)
    dm = dm0
    errs, focks = [], []
    for it in range(max_iter):
        eps, cp = np.linalg.eigh(x.T @ f @ x)
        c_occ = (x @ cp)[:, :n_occ]
        dm_new = 2.0 * c_occ @ c_occ.T
        dm = dm_new if (dm is None or it >= n_damped) else damp * dm_new + (1 - damp) * dm
        f = fock_of(dm)
        err = f @ dm @ s - s @ dm @ f
        if np.abs(err).max() < conv and it > 3:
            break
        if it >= n_damped:
            errs.append(err)
            focks.append(f)
            if len(errs) > 8:
                errs.pop(0)
                focks.pop(0)
            if len(errs) > 1:
                m = len(errs)
                bmat = -np.ones((m + 1, m + 1))
                bmat[m, m] = 0.0
                for i in range(m):
                    for j in range(m):
                        bmat[i, j] = np.einsum("pq,pq->", errs[i], errs[j])
                rhs = np.zeros(m + 1)
                rhs[m] = -1.0
                try:
                    f = sum(cf * fk for cf, fk in zip(np.linalg.solve(bmat, rhs)[:m], focks))
                except np.linalg.LinAlgError:
                    pass
    else:
        raise RuntimeError("SCF failed to converge")
    energy = 0.5 * np.einsum("pq,pq->", dm, hcore + fock_of(dm)) + ao["e_nuc"]

    # canonical orbitals of the true converged Fock (not a DIIS extrapolate)
    fp = x.T @ fock_of(dm) @ x
    eps, cp = np.linalg.eigh(fp)
    c = x @ cp
    # deterministic sign gauge: largest-|.| AO coefficient of each MO positive
    for k in range(n):
        pivot = np.argmax(np.abs(c[:, k]))
        if c[pivot, k] < 0:
            c[:, k] = -c[:, k]
    return {"energy": float(energy), "mo_coeff": c, "mo_energy": eps, "n_occ": n_occ, "dm": dm}


def mo_integrals(ao, scf) -> tuple[MolecularIntegrals, DipoleIntegrals]:
    c = scf["mo_coeff"]
    h = c.T @ (ao["t"] + ao["v"]) @ c
    eri = np.einsum("pi,pqrs->iqrs", c, ao["eri"], optimize=True)
    eri = np.einsum("qj,iqrs->ijrs", c, eri, optimize=True)
    eri = np.einsum("rk,ijrs->ijks", c, eri, optimize=True)
    eri = np.einsum("sl,ijks->ijkl", c, eri, optimize=True)
    dip = np.einsum("pi,cpq,qj->cij", c, ao["dip"], c, optimize=True)
    return (
        MolecularIntegrals(e_core=ao["e_nuc"], h=h, eri=eri, n_elec=0),
        DipoleIntegrals(components=dip, nuclear=ao["nuc_dip"]),
    )


# ----------------------------------------------------------------------
# fixture assembly
# ----------------------------------------------------------------------
def fci_constants(mi: MolecularIntegrals):
    ham = build_molecular_hamiltonian(mi)
    nq = 2 * mi.n_orb
    e_fci, v_fci = exact_ground_state(ham, n_qubits=nq, n_elec=mi.n_elec, sz=mi.ms2 / 2.0)
    ref = basis_state(nq, hf_occupation(mi.n_alpha, mi.n_beta))
    return {
        "fci_energy": float(e_fci),
        "hf_energy": hf_energy(mi),
        "hf_fidelity": fidelity(ref, v_fci),
    }


def emit(outdir, name, mi, dip, notes, skip_fci=False):
    path = os.path.join(outdir, name)
    os.makedirs(path, exist_ok=True)
    write_fcidump(mi, os.path.join(path, "FCIDUMP"))
    if dip is not None:
        write_property_integrals(dip, os.path.join(path, "DIPOLES"))
    constants = {"n_orb": mi.n_orb, "n_elec": mi.n_elec, "ms2": mi.ms2}
    if not skip_fci:
        constants.update(fci_constants(mi))
    with open(os.path.join(path, "constants.json"), "w") as fh:
        json.dump(constants, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(path, "provenance.md"), "w") as fh:
        fh.write(f"# {name}\n\n{notes}\n")
    line = ", ".join(
        f"{k}={v:.8f}" if isinstance(v, float) else f"{k}={v}" for k, v in constants.items()
    )
    print(f"  {name}: {line}")
    return constants


def molecular_fixture(atoms, n_elec, n_frozen=0, dm0=None):
    """Full pipeline: AO integrals -> RHF -> MO basis -> optional core folding."""
    ao = integrals_ao(atoms)
    scf = run_rhf(ao, n_elec, dm0=dm0)
    mi, dip = mo_integrals(ao, scf)
    mi = MolecularIntegrals(e_core=mi.e_core, h=mi.h, eri=mi.eri, n_elec=n_elec)
    if n_frozen:
        mi_act = freeze_core(mi, n_frozen)
        # fold the frozen orbitals' electron dipole into the constant part
        core_dip = dip.nuclear - 2.0 * np.einsum("cii->c", dip.components[:, :n_frozen, :n_frozen])
        dip = DipoleIntegrals(
            components=dip.components[:, n_frozen:, n_frozen:].copy(), nuclear=core_dip
        )
        return mi_act, dip, scf
    return mi, dip, scf


def chain(symbol, count, spacing_bohr):
    return [(symbol, np.array([0.0, 0.0, k * spacing_bohr])) for k in range(count)]


# ----------------------------------------------------------------------
# validation anchors (published STO-3G H2 values at R = 1.4 bohr)
# ----------------------------------------------------------------------
def validate_engine():
    atoms = [("H", np.zeros(3)), ("H", np.array([0.0, 0.0, 1.4]))]
    ao = integrals_ao(atoms)
    anchors = [
        ("S12", ao["s"][0, 1], 0.6593),
        ("T11", ao["t"][0, 0], 0.7600),
        ("(11|11)", ao["eri"][0, 0, 0, 0], 0.7746),
        ("(11|22)", ao["eri"][0, 0, 1, 1], 0.5697),
        ("(11|12)", ao["eri"][0, 0, 0, 1], 0.4441),
        ("(12|12)", ao["eri"][0, 1, 0, 1], 0.2970),
    ]
    for label, got, want in anchors:
        if abs(got - want) > 5e-4:
            raise RuntimeError(f"anchor {label}: got {got:.6f}, expected {want:.4f}")
    scf = run_rhf(ao, 2)
    if abs(scf["energy"] - (-1.1167)) > 2e-4:
        raise RuntimeError(f"H2 RHF anchor: got {scf['energy']:.6f}, expected -1.1167")
    print(f"engine anchors OK (H2@1.4a0: RHF = {scf['energy']:.6f})")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "fixtures"))
    ap.add_argument("--ozone", action="store_true", help="also build the slow 18-qubit fixture")
    args = ap.parse_args(argv)
    outdir = os.path.abspath(args.out)
    os.makedirs(outdir, exist_ok=True)

    validate_engine()

    sto = "restricted Hartree-Fock in the STO-3G basis (integrals computed by this script's"
    sto += " McMurchie-Davidson engine, validated against published H2 anchors); canonical"
    sto += " MO-basis integrals; energies in hartree, geometries quoted in angstrom."

    print("fixtures:")
    for r in (0.74, 1.50, 2.50):
        atoms = [("H", np.zeros(3)), ("H", np.array([0.0, 0.0, r * ANGSTROM]))]
        mi, dip, _ = molecular_fixture(atoms, n_elec=2)
        emit(outdir, f"h2_{r:.2f}", mi, dip, f"H2 at R = {r:.2f} A.  {sto}")

    mi, dip, _ = molecular_fixture(chain("H", 4, 1.5 * ANGSTROM), n_elec=4)
    emit(outdir, "h4_chain", mi, dip, f"Linear H4 chain, 1.50 A spacing.  {sto}")

    mi, dip, _ = molecular_fixture(chain("H", 6, 2.0 * ANGSTROM), n_elec=6)
    emit(outdir, "h6_chain_2.00", mi, dip, f"Linear H6 chain, 2.00 A spacing.  {sto}")

    # bent 3-orbital polar model: He + 2 H at a water-like angle => nonzero
    # dipole, 4 electrons in 3 orbitals, full orbital space kept for response
    theta = math.radians(104.5 / 2.0)
    r_he_h = 0.95 * ANGSTROM
    atoms = [
        ("He", np.zeros(3)),
        ("H", np.array([0.0, r_he_h * math.sin(theta), r_he_h * math.cos(theta)])),
        ("H", np.array([0.0, -r_he_h * math.sin(theta), r_he_h * math.cos(theta)])),
    ]
    mi, dip, _ = molecular_fixture(atoms, n_elec=4)
    emit(
        outdir, "water_like", mi, dip,
        "Bent HeH2 model (He apex, 104.5 deg, He-H 0.95 A): a minimal polar"
        f" 3-orbital closed-shell system with dipole integrals.  {sto}",
    )

    # Walk the N2 bond outward, seeding each SCF with the previous converged
    # density.  Stretched N2 has a lower RHF stationary point that breaks
    # cylindrical symmetry (it doubly occupies the bonding and antibonding pi
    # of a single direction); following the closed-shell branch from
    # equilibrium keeps the pi shells exactly degenerate at every bond length.
    dm = None
    for r in (1.098, 1.3, 1.5, 1.8, 2.0, 2.2, 2.35, 2.5):
        atoms = [("N", np.zeros(3)), ("N", np.array([0.0, 0.0, r * ANGSTROM]))]
        if r in (1.098, 1.8, 2.5):
            mi, dip, scf = molecular_fixture(atoms, n_elec=14, n_frozen=4, dm0=dm)
            emit(
                outdir, f"n2_{r:.3f}", mi, dip,
                f"N2 at R = {r:.3f} A, active space of 6 electrons in 6 orbitals"
                f" (4 lowest canonical orbitals folded into the core).  SCF"
                f" continued from the previous bond length to stay on the"
                f" symmetric closed-shell branch.  {sto}",
            )
        else:
            scf = run_rhf(integrals_ao(atoms), 14, dm0=dm)
        dm = scf["dm"]

    if args.ozone:
        ang = math.radians(116.8)
        r_oo = 1.272 * ANGSTROM
        atoms = [
            ("O", np.zeros(3)),
            ("O", np.array([0.0, r_oo * math.sin(ang / 2), r_oo * math.cos(ang / 2)])),
            ("O", np.array([0.0, -r_oo * math.sin(ang / 2), r_oo * math.cos(ang / 2)])),
        ]
        mi, dip, _ = molecular_fixture(atoms, n_elec=24, n_frozen=6)
        emit(
            outdir, "o3_cas12_9", mi, dip,
            "Bent O3 (116.8 deg, O-O 1.272 A), active space of 12 electrons in"
            f" 9 orbitals.  FCI constant omitted (18 qubits).  {sto}",
            skip_fci=True,
        )

    print("done.")


if __name__ == "__main__":
    main()
