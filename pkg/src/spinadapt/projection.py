"""Spin projection by quadrature over global spin rotations.

The projector onto total spin ``s`` at ``S_z = m`` is a rotation average.
Its two azimuthal-angle integrals act as projectors onto the ``S_z = m``
sector (simple basis-state masks here), leaving one integral over the polar
angle beta of ``exp(-i beta S_y)`` weighted by a Wigner small-d function.
Substituting ``x = cos(beta)`` turns that into a Gauss-Legendre sum

    P = M_m  *  sum_g w_g U(beta_g)  *  M_m,
    w_g = (2s+1)/2 * w_g^GL * d^s_mm(beta_g),

with ``M_m`` the sector mask.  The quadrature is exact once the node count
resolves every spin component the state can hold (half the orbital count
plus one suffices at half filling).

Because alpha and beta spin orbitals of the same spatial orbital sit on
adjacent qubits, ``exp(-i beta S_y)`` factors exactly into independent
two-qubit rotations -- no Jordan-Wigner strings survive -- so each quadrature
point costs one pass over the state vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .statevector import apply_pauli_sum, n_qubits_of

__all__ = [
    "wigner_small_d",
    "ProjectionGrid",
    "make_projection_grid",
    "apply_spin_rotation",
    "apply_projector",
    "apply_projector_adjoint",
    "projected_expectation",
]


def _two_j(value: float, name: str) -> int:
    doubled = int(round(2 * value))
    if abs(2 * value - doubled) > 1e-9:
        raise ValueError(f"{name} must be integer or half-integer, got {value}")
    return doubled


def wigner_small_d(s: float, m1: float, m2: float, beta: float) -> float:
    """Matrix element ``<s m1| exp(-i beta S_y) |s m2>`` for real spins."""
    ts, tm1, tm2 = _two_j(s, "s"), _two_j(m1, "m1"), _two_j(m2, "m2")
    if (ts + tm1) % 2 or (ts + tm2) % 2:
        raise ValueError("m1, m2 must differ from s by integers")
    if abs(tm1) > ts or abs(tm2) > ts:
        raise ValueError("|m| cannot exceed s")
    jp1, jm1 = (ts + tm1) // 2, (ts - tm1) // 2
    jp2, jm2 = (ts + tm2) // 2, (ts - tm2) // 2
    pref = math.sqrt(
        math.factorial(jp1) * math.factorial(jm1) * math.factorial(jp2) * math.factorial(jm2)
    )
    c, sn = math.cos(beta / 2.0), math.sin(beta / 2.0)
    total = 0.0
    for k in range(max(0, (tm2 - tm1) // 2), min(jp2, jm1) + 1):
        denom = (
            math.factorial(jp2 - k)
            * math.factorial(k)
            * math.factorial((tm1 - tm2) // 2 + k)
            * math.factorial(jm1 - k)
        )
        total += (
            (-1.0) ** ((tm1 - tm2) // 2 + k)
            * c ** (ts + (tm2 - tm1) // 2 - 2 * k)
            * sn ** ((tm1 - tm2) // 2 + 2 * k)
            / denom
        )
    return pref * total


@dataclass(frozen=True)
class ProjectionGrid:
    """Quadrature nodes/weights selecting total spin ``spin`` at ``<S_z> = m``."""

    spin: float
    m: float
    betas: np.ndarray
    weights: np.ndarray

    @property
    def n_points(self) -> int:
        return len(self.betas)


def make_projection_grid(
    spin: float,
    n_points: int | None = None,
    *,
    m: float | None = None,
    n_orbitals: int | None = None,
) -> ProjectionGrid:
    """Build the Gauss-Legendre grid for the spin projector.

    When ``n_points`` is omitted it is chosen as ``n_orbitals // 2 + 1``,
    which is always enough for an exact projection.
    """
    if m is None:
        m = spin
    if n_points is None:
        if n_orbitals is None:
            raise ValueError("give n_points or n_orbitals")
        n_points = n_orbitals // 2 + 1
    if n_points < 1:
        raise ValueError("need at least one quadrature point")
    nodes, gl_weights = np.polynomial.legendre.leggauss(n_points)
    betas = np.arccos(nodes)
    weights = np.array(
        [
            (2 * spin + 1) / 2.0 * w * wigner_small_d(spin, m, m, beta)
            for w, beta in zip(gl_weights, betas)
        ]
    )
    order = np.argsort(betas)
    return ProjectionGrid(spin, m, betas[order], weights[order])


@lru_cache(maxsize=None)
def _orbital_pair_indices(n_qubits: int, orbital: int):
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    a_bit = 1 << (2 * orbital)
    pair = a_bit | (a_bit << 1)
    alpha_only = idx[(idx & pair) == a_bit]
    return alpha_only, alpha_only ^ pair


@lru_cache(maxsize=None)
def _sz_sector_mask(n_qubits: int, two_m: int) -> np.ndarray:
    """Boolean mask of basis states with ``n_alpha - n_beta == two_m``."""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    alpha_mask = sum(1 << q for q in range(0, n_qubits, 2))
    beta_mask = sum(1 << q for q in range(1, n_qubits, 2))
    n_alpha = np.bitwise_count(idx & alpha_mask).astype(np.int64)
    n_beta = np.bitwise_count(idx & beta_mask).astype(np.int64)
    return n_alpha - n_beta == two_m


def apply_spin_rotation(state: np.ndarray, beta: float) -> np.ndarray:
    """``exp(-i beta S_y)|state>`` as a product of per-orbital rotations."""
    n_qubits = n_qubits_of(state)
    c, s = math.cos(beta / 2.0), math.sin(beta / 2.0)
    out = state.copy()
    for p in range(n_qubits // 2):
        ia, ib = _orbital_pair_indices(n_qubits, p)
        ca, cb = out[ia], out[ib]
        out[ia] = c * ca - s * cb
        out[ib] = s * ca + c * cb
    return out


def apply_projector(state: np.ndarray, grid: ProjectionGrid) -> np.ndarray:
    """Unnormalized ``P|state>`` (masked quadrature sum of rotated copies)."""
    keep = _sz_sector_mask(n_qubits_of(state), _two_j(grid.m, "m"))
    masked = np.where(keep, state, 0.0)
    out = np.zeros_like(state)
    for beta, w in zip(grid.betas, grid.weights):
        out += w * apply_spin_rotation(masked, beta)
    out[~keep] = 0.0
    return out


def apply_projector_adjoint(state: np.ndarray, grid: ProjectionGrid) -> np.ndarray:
    """``P^dagger |state>``; differs from ``P`` only off the exact grid."""
    keep = _sz_sector_mask(n_qubits_of(state), _two_j(grid.m, "m"))
    masked = np.where(keep, state, 0.0)
    out = np.zeros_like(state)
    for beta, w in zip(grid.betas, grid.weights):
        out += w * apply_spin_rotation(masked, -beta)
    out[~keep] = 0.0
    return out


def projected_expectation(hamiltonian, state: np.ndarray, grid: ProjectionGrid):
    """Energy of the spin-projected state and the projection weight.

    Returns ``(energy, weight)`` with ``energy = <psi|H P|psi> / <psi|P|psi>``
    and ``weight = Re <psi|P|psi>`` (how much of the state survives
    projection; 1 for an already-pure spin state on an exact grid).
    """
    projected = apply_projector(state, grid)
    phi = apply_pauli_sum(hamiltonian, state)
    numerator = complex(np.vdot(phi, projected))
    weight = complex(np.vdot(state, projected)).real
    return (numerator / weight).real, weight
