"""Noiseless statevector kernels.

States are dense ``numpy`` arrays of ``complex128`` with little-endian basis
indexing: bit ``q`` of the index is the occupation of qubit/spin orbital
``q``.  The workhorses are

* :func:`apply_excitation` -- exact exponential of an anti-Hermitian ladder
  excitation ``T - T^dagger``.  Such a generator couples basis states in
  disjoint pairs, so the exponential is a direct sum of 2x2 Givens rotations
  and is applied analytically (no Trotterization, no dense matrices).
* :func:`apply_pauli_rotation` / :func:`apply_pauli_sum` -- exponentials of
  single Pauli words and applications of word sums.
* :func:`exact_ground_state` -- sector-filtered exact diagonalization used as
  the FCI oracle.

The fermionic sign of an excitation splits into a constant part (fixed by the
index tuple) and a state-dependent part equal to the occupation parity under
the Jordan-Wigner Z chains; both are precomputed per excitation and cached.
"""

from __future__ import annotations

import struct
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import eigsh

__all__ = [
    "basis_state",
    "apply_excitation",
    "apply_pauli_rotation",
    "apply_pauli_sum",
    "expectation",
    "transition",
    "exact_ground_state",
    "sector_indices",
    "fidelity",
    "excitation_pairs",
    "excitation_transition",
    "ladder_transition",
    "n_qubits_of",
    "save_state",
    "load_state",
]

_DUMP_MAGIC = b"SVST"


def _indices(n_qubits: int) -> np.ndarray:
    return _cached_indices(n_qubits)


@lru_cache(maxsize=None)
def _cached_indices(n_qubits: int) -> np.ndarray:
    return np.arange(1 << n_qubits, dtype=np.int64)


def _parity(values: np.ndarray, mask: int) -> np.ndarray:
    """Occupation parity of ``values & mask`` as 0/1 int array."""
    return (np.bitwise_count(values & mask) & 1).astype(np.int64)


def n_qubits_of(state: np.ndarray) -> int:
    n = int(state.size).bit_length() - 1
    if 1 << n != state.size:
        raise ValueError("state length is not a power of two")
    return n


def basis_state(n_qubits: int, occupied) -> np.ndarray:
    """Computational basis state with the given qubits occupied."""
    index = 0
    for q in occupied:
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit {q} outside register of {n_qubits}")
        if index >> q & 1:
            raise ValueError(f"qubit {q} listed twice")
        index |= 1 << q
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[index] = 1.0
    return state


# ----------------------------------------------------------------------
# ladder excitations
# ----------------------------------------------------------------------
def _ladder_sign(ops, start: int) -> int:
    """Apply ladder factors right to left to basis index ``start``.

    Returns the accumulated sign; raises if the action annihilates the state
    (callers only use pattern-compatible starts).
    """
    state, sign = start, 1
    for mode, creation in reversed(ops):
        bit = (state >> mode) & 1
        if creation == bool(bit):
            raise ValueError("ladder sequence annihilates the probe state")
        if ((state & ((1 << mode) - 1)).bit_count()) & 1:
            sign = -sign
        state ^= 1 << mode
    return sign


@lru_cache(maxsize=None)
def excitation_pairs(creation: tuple, annihilation: tuple, n_qubits: int, fermionic: bool = True):
    """Coupled index pairs and signs for ``T - T^dagger``.

    ``T = a^dag_{c1} a^dag_{c2} ... a_{n1} a_{n2} ...`` maps each basis state
    ``I`` matching the occupation pattern to a partner ``J`` with a sign
    ``S(I)``; this returns ``(I, J, S)`` as aligned arrays such that
    ``(T - T^dag)|I> = S|J>`` and ``(T - T^dag)|J> = -S|I>``.  With
    ``fermionic=False`` the Jordan-Wigner chain parity is dropped, which
    realizes the corresponding qubit excitation.
    """
    cre_mask = ann_mask = 0
    for m in creation:
        cre_mask |= 1 << m
    for m in annihilation:
        ann_mask |= 1 << m
    if len(creation) != len(set(creation)) or len(annihilation) != len(set(annihilation)):
        raise ValueError("repeated index within a creation or annihilation group")
    if cre_mask == ann_mask:
        raise ValueError("excitation is diagonal (creation == annihilation)")
    if not fermionic and (cre_mask & ann_mask):
        # a shared index carries an occupancy projector whose Z letters sit on
        # an X-free qubit; stripping them changes the operator, so the qubit
        # variant is only defined for disjoint index sets
        raise ValueError("qubit excitations require disjoint creation/annihilation")
    targets = cre_mask | ann_mask
    flip = cre_mask ^ ann_mask

    chain = 0
    for m in (*creation, *annihilation):
        chain ^= (1 << m) - 1
    chain &= ~targets

    ops = [(m, True) for m in creation] + [(m, False) for m in annihilation]
    base_sign = _ladder_sign(ops, ann_mask)

    idx = _indices(n_qubits)
    source = idx[(idx & targets) == ann_mask]
    partner = source ^ flip
    if fermionic:
        signs = base_sign * (1 - 2 * _parity(source, chain))
    else:
        signs = np.full(source.shape, base_sign, dtype=np.int64)
    return source, partner, signs


def apply_excitation(state, creation, annihilation, theta, *, fermionic=True):
    """Apply ``exp(theta * (T - T^dagger))`` to ``state`` (returns a copy).

    The creation/annihilation tuples use qubit (= spin-orbital) indices.  The
    rotation acts as a Givens rotation on every coupled pair of basis states
    and as the identity elsewhere.
    """
    n = n_qubits_of(state)
    src, dst, signs = excitation_pairs(tuple(creation), tuple(annihilation), n, fermionic)
    out = state.copy()
    c, s = np.cos(theta), np.sin(theta)
    vi, vj = state[src], state[dst]
    out[src] = c * vi - signs * s * vj
    out[dst] = signs * s * vi + c * vj
    return out


def excitation_transition(bra, ket, creation, annihilation, *, fermionic=True) -> complex:
    """``<bra| (T - T^dagger) |ket>`` without materializing the action."""
    n = n_qubits_of(ket)
    src, dst, signs = excitation_pairs(tuple(creation), tuple(annihilation), n, fermionic)
    return complex(
        np.sum(signs * (np.conj(bra[dst]) * ket[src] - np.conj(bra[src]) * ket[dst]))
    )


def ladder_transition(bra, ket, ops) -> complex:
    """``<bra| a(+)_{m1} a(+)_{m2} ... |ket>`` for a literal ladder product.

    ``ops`` is a sequence of ``(mode, is_creation)`` factors in written order
    (applied right to left).  Unlike :func:`excitation_transition` this is a
    one-directional product -- the building block for density matrices.
    """
    n = n_qubits_of(ket)
    idx = _indices(n)
    cur = idx.copy()
    alive = np.ones(idx.shape, dtype=bool)
    sign = np.ones(idx.shape, dtype=np.int64)
    for mode, creating in reversed(tuple(ops)):
        bit = 1 << mode
        occupied = (cur & bit) != 0
        alive &= ~occupied if creating else occupied
        sign *= 1 - 2 * _parity(cur, bit - 1)
        cur ^= bit
    src, dst, s = idx[alive], cur[alive], sign[alive]
    return complex(np.sum(s * np.conj(bra[dst]) * ket[src]))


# ----------------------------------------------------------------------
# Pauli words
# ----------------------------------------------------------------------
def apply_pauli_string(string, state, coeff=1.0) -> np.ndarray:
    """Apply ``coeff * P`` for a single Pauli word ``P``."""
    n = n_qubits_of(state)
    idx = _indices(n)
    w = coeff * (1j) ** string.n_y
    signed = state if string.z == 0 else (1 - 2 * _parity(idx, string.z)) * state
    if string.x == 0:
        return w * signed
    return w * signed[idx ^ string.x]


def apply_pauli_sum(psum, state) -> np.ndarray:
    """Apply a :class:`~spinadapt.fermions.PauliSum` to a state."""
    n = n_qubits_of(state)
    idx = _indices(n)
    out = np.zeros_like(state)
    for string, coeff in psum.terms.items():
        w = coeff * (1j) ** string.n_y
        signed = state if string.z == 0 else (1 - 2 * _parity(idx, string.z)) * state
        if string.x == 0:
            out += w * signed
        else:
            out += w * signed[idx ^ string.x]
    return out


def apply_pauli_rotation(state, string, theta) -> np.ndarray:
    """Apply ``exp(theta * i * P)`` for a Pauli word ``P`` (``P**2 = 1``)."""
    return np.cos(theta) * state + 1j * np.sin(theta) * apply_pauli_string(string, state)


def expectation(psum, state) -> float:
    """Real expectation value ``<state|psum|state>``."""
    return float(np.real(np.vdot(state, apply_pauli_sum(psum, state))))


def transition(psum, bra, ket) -> complex:
    """Matrix element ``<bra|psum|ket>``."""
    return complex(np.vdot(bra, apply_pauli_sum(psum, ket)))


def fidelity(a, b) -> float:
    """Squared overlap ``|<a|b>|**2``."""
    return float(abs(np.vdot(a, b)) ** 2)


# ----------------------------------------------------------------------
# exact diagonalization
# ----------------------------------------------------------------------
def sector_indices(n_qubits: int, n_elec=None, sz=None) -> np.ndarray:
    """Basis indices of the (N, S_z) symmetry sector.

    ``sz`` is in units of hbar (so 0.5 for a lone alpha electron).  Either
    filter may be ``None`` to leave that quantum number free.  Alpha spin
    orbitals sit on even qubits, beta on odd ones.
    """
    idx = _indices(n_qubits)
    keep = np.ones(idx.shape, dtype=bool)
    alpha_mask = sum(1 << q for q in range(0, n_qubits, 2))
    beta_mask = sum(1 << q for q in range(1, n_qubits, 2))
    n_alpha = np.bitwise_count(idx & alpha_mask)
    n_beta = np.bitwise_count(idx & beta_mask)
    if n_elec is not None:
        keep &= (n_alpha + n_beta) == n_elec
    if sz is not None:
        keep &= (n_alpha.astype(np.int64) - n_beta) == round(2 * sz)
    return idx[keep]


def pauli_sum_matrix(psum, n_qubits: int) -> csr_matrix:
    """Sparse matrix of a Pauli sum (column ``b`` holds ``psum|b>``)."""
    idx = _indices(n_qubits)
    dim = idx.size
    total = csr_matrix((dim, dim), dtype=complex)
    strings = list(psum.terms.items())
    for start in range(0, len(strings), 64):
        rows, cols, data = [], [], []
        for string, coeff in strings[start:start + 64]:
            w = coeff * (1j) ** string.n_y
            phase = w * (1 - 2 * _parity(idx, string.z))
            rows.append(idx ^ string.x)
            cols.append(idx)
            data.append(phase.astype(complex))
        block = csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim),
        )
        total = total + block
    return total


def exact_ground_state(psum, n_qubits: int, n_elec=None, sz=None):
    """Lowest eigenpair of a Pauli-sum Hamiltonian, optionally in a sector.

    Returns ``(energy, state)`` with the state embedded in the full
    ``2**n_qubits`` register.  Sector dimensions up to 2048 are handled
    densely; larger ones fall back to Lanczos with a deterministic start
    vector.  Raises if the operator leaks out of the requested sector.
    """
    matrix = pauli_sum_matrix(psum, n_qubits)
    sel = sector_indices(n_qubits, n_elec, sz)
    if sel.size == 0:
        raise ValueError("requested symmetry sector is empty")
    if sel.size < 1 << n_qubits:
        keep = np.zeros(1 << n_qubits, dtype=bool)
        keep[sel] = True
        outside = matrix[~keep][:, sel]
        if outside.nnz and np.max(np.abs(outside.data)) > 1e-12:
            raise ValueError("operator does not preserve the requested sector")
        sub = matrix[sel][:, sel]
    else:
        sub = matrix
    if sel.size <= 2048:
        dense = sub.toarray()
        energies, vectors = np.linalg.eigh(dense)
        energy, vec = energies[0], vectors[:, 0]
    else:
        v0 = np.full(sel.size, 1.0 / np.sqrt(sel.size))
        energies, vectors = eigsh(sub, k=1, which="SA", v0=v0)
        energy, vec = energies[0], vectors[:, 0]
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[sel] = vec
    # fix the global phase so results are reproducible bit for bit
    pivot = np.argmax(np.abs(state) > 1e-9)
    phase = state[pivot] / abs(state[pivot])
    state = state / phase
    return float(energy), state


# ----------------------------------------------------------------------
# binary state dumps
# ----------------------------------------------------------------------
def save_state(path, state) -> None:
    """Write a state as magic + qubit count + raw little-endian doubles."""
    n = n_qubits_of(state)
    with open(path, "wb") as fh:
        fh.write(_DUMP_MAGIC)
        fh.write(struct.pack("<I", n))
        fh.write(np.ascontiguousarray(state, dtype="<c16").tobytes())


def load_state(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _DUMP_MAGIC:
            raise ValueError(f"not a state dump (bad magic {magic!r})")
        (n,) = struct.unpack("<I", fh.read(4))
        data = np.frombuffer(fh.read(), dtype="<c16")
    if data.size != 1 << n:
        raise ValueError("state dump truncated")
    return data.astype(complex)
