"""Operator pools for adaptive ansatz construction, with CNOT cost models.

Seven pool kinds are supported, all enumerated over ``n_orbitals`` spatial
orbitals (interleaved spin orbitals: alpha = even qubits, beta = odd):

``fermionic-paired``
    Spin-complemented excitations: each entry sums an operator and its
    spin-flipped partner (self-paired operators appear once).  When the two
    halves do not commute (mixed doubles sharing a spatial index) the entry
    is applied as the ordered product of the two rotations.
``fermionic-spin``
    Individual spin-dependent excitations; repeated spatial indices are
    allowed (number-operator-weighted excitations).
``qeb``
    Qubit excitations: the same generators with the Jordan-Wigner Z chains
    stripped; all four qubit indices must be distinct.
``qeb-scheme1/2/3``
    Nested truncations of ``qeb`` keeping one written spin ordering of the
    mixed doubles (scheme 1), additionally ordered against the annihilated
    alpha orbital (scheme 2), or ordered within both spins (scheme 3).
    Schemes 2 and 3 also drop the beta singles.
``qubit-pauli``
    Individual Pauli words with a single Y letter: ``X_p Y_q`` and
    ``X X X Y`` patterns.  These do not conserve particle number or S_z.

Everywhere, S_z-conserving doubles that merely swap the spin labels of two
orbitals (create {p-alpha, q-beta}, annihilate {q-alpha, p-beta}) are left
out of the pools: they only rotate between spin arrangements, which the spin
projector already accounts for.

The CNOT costs are per excitation when compiled to staircase-free circuits:
13 per qubit double and 2 per qubit single; ``2(p - q + r - s) + 9`` per
fermionic double and ``2(p - q) + 1`` per fermionic single (qubit indices);
6 per weight-4 Pauli word and 2 per weight-2 word.  The naive exponential
construction for comparison costs ``8(p - q + r - s + 2)`` per double.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fermions import PauliString, PauliSum, excitation_generator, jordan_wigner, strip_z
from .statevector import (
    apply_excitation,
    apply_pauli_rotation,
    apply_pauli_string,
    excitation_transition,
)

__all__ = [
    "Excitation",
    "Pool",
    "POOL_KINDS",
    "build_pool",
    "cnot_cost",
    "naive_cnot_cost",
]

POOL_KINDS = (
    "fermionic-paired",
    "fermionic-spin",
    "qubit-pauli",
    "qeb",
    "qeb-scheme1",
    "qeb-scheme2",
    "qeb-scheme3",
)


@dataclass(frozen=True)
class Excitation:
    """One pool entry: a rotation generator with a single shared angle.

    ``components`` holds index tuples -- ``(P, Q)`` for ``a+_P a_Q`` singles
    or ``(P, Q, R, S)`` for ``a+_P a+_Q a_R a_S`` doubles, always written
    with ``P > Q`` and ``R > S`` -- and ``signs`` their relative signs in the
    summed generator.  Pauli-word entries store the word itself instead.
    """

    flavor: str  # "fermionic" | "qubit" | "pauli"
    components: tuple = ()
    signs: tuple = ()
    pauli: PauliString = None

    @property
    def kind(self) -> str:
        if self.flavor == "pauli":
            return "single" if self.pauli.weight == 2 else "double"
        return "single" if len(self.components[0]) == 2 else "double"

    def label(self) -> str:
        if self.flavor == "pauli":
            return self.pauli.label()
        bits = []
        for comp, sign in zip(self.components, self.signs):
            half = len(comp) // 2
            cre = ",".join(str(i) for i in comp[:half])
            ann = ",".join(str(i) for i in comp[half:])
            bits.append(f"{'-' if sign < 0 else ''}({cre}<-{ann})")
        return "+".join(bits).replace("+-", "-")

    # ------------------------------------------------------------------
    def apply(self, state: np.ndarray, theta: float) -> np.ndarray:
        """Rotate ``state`` by ``exp(theta * generator)``.

        Multi-component entries apply their component rotations in listed
        order (exact when the halves commute, a first-order splitting
        otherwise -- which is the usual choice for spin-complemented pools).
        """
        if self.flavor == "pauli":
            return apply_pauli_rotation(state, self.pauli, theta)
        fermionic = self.flavor == "fermionic"
        for comp, sign in zip(self.components, self.signs):
            half = len(comp) // 2
            state = apply_excitation(
                state, comp[:half], comp[half:], sign * theta, fermionic=fermionic
            )
        return state

    def apply_inverse(self, state: np.ndarray, theta: float) -> np.ndarray:
        """Undo :meth:`apply` (components in reverse order, angle negated)."""
        if self.flavor == "pauli":
            return apply_pauli_rotation(state, self.pauli, -theta)
        fermionic = self.flavor == "fermionic"
        for comp, sign in reversed(tuple(zip(self.components, self.signs))):
            half = len(comp) // 2
            state = apply_excitation(
                state, comp[:half], comp[half:], -sign * theta, fermionic=fermionic
            )
        return state

    def transition(self, bra: np.ndarray, ket: np.ndarray) -> complex:
        """``<bra| A |ket>`` for the entry's generator ``A``."""
        if self.flavor == "pauli":
            return 1j * complex(np.vdot(bra, apply_pauli_string(self.pauli, ket)))
        fermionic = self.flavor == "fermionic"
        total = 0.0j
        for comp, sign in zip(self.components, self.signs):
            half = len(comp) // 2
            total += sign * excitation_transition(
                bra, ket, comp[:half], comp[half:], fermionic=fermionic
            )
        return total

    def generator_pauli_sum(self) -> PauliSum:
        """The anti-Hermitian generator as an explicit Pauli sum (for checks)."""
        if self.flavor == "pauli":
            return PauliSum({self.pauli: 1j})
        total = PauliSum.zero()
        for comp, sign in zip(self.components, self.signs):
            half = len(comp) // 2
            image = jordan_wigner(excitation_generator(comp[:half], comp[half:], sign))
            if self.flavor == "qubit":
                image = strip_z(image)
            total = total + image
        return total


@dataclass
class Pool:
    """An ordered operator pool."""

    kind: str
    n_orbitals: int
    excitations: list = field(default_factory=list)

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_orbitals

    def __len__(self):
        return len(self.excitations)

    def __iter__(self):
        return iter(self.excitations)

    def __getitem__(self, i):
        return self.excitations[i]


# ----------------------------------------------------------------------
# enumeration helpers
# ----------------------------------------------------------------------
def _spin(q: int) -> int:
    return q & 1  # 0 = alpha, 1 = beta


def _flip(comp: tuple) -> tuple[tuple, int]:
    """Spin-flip a component (toggle every index's spin), recanonicalized.

    Canonical form sorts each index pair descending and puts the larger pair
    first; each swap conjugates the generator, so the returned sign restores
    the literal spin-flipped operator from the canonical one.
    """
    half = len(comp) // 2
    cre = [q ^ 1 for q in comp[:half]]
    ann = [q ^ 1 for q in comp[half:]]
    sign = 1
    if len(cre) == 2 and cre[0] < cre[1]:
        cre.reverse()
        sign = -sign
    if len(ann) == 2 and ann[0] < ann[1]:
        ann.reverse()
        sign = -sign
    if tuple(cre) < tuple(ann):
        cre, ann = ann, cre
        sign = -sign
    return tuple(cre) + tuple(ann), sign


def _is_spin_exchange(comp: tuple) -> bool:
    if len(comp) != 4:
        return False
    cre, ann = set(comp[:2]), set(comp[2:])
    if len(cre & ann) or {_spin(q) for q in cre} != {0, 1} or {_spin(q) for q in ann} != {0, 1}:
        return False
    return {q ^ 1 for q in cre} == ann


def _same_spin_pairs(n_qubits: int, spins=(0, 1)):
    return [
        (p, q)
        for p in range(n_qubits)
        for q in range(p)
        if _spin(p) == _spin(q) and _spin(p) in spins
    ]


def _double_components(n_qubits: int, require_distinct: bool):
    """All canonical S_z-conserving doubles, spin-exchange excluded."""
    pairs = [(p, q) for p in range(n_qubits) for q in range(p)]
    out = []
    for i, (p, q) in enumerate(pairs):
        for j in range(i):
            r, s = pairs[j]
            if _spin(p) + _spin(q) != _spin(r) + _spin(s):
                continue
            comp = (p, q, r, s)
            if require_distinct and len({p, q, r, s}) != 4:
                continue
            if _is_spin_exchange(comp):
                continue
            out.append(comp)
    return out


def _mixed_spatial_reps(comp: tuple):
    """Spatial-index views (beta-cre, alpha-cre, beta-ann, alpha-ann) of a
    mixed double, one per orientation of the operator."""
    cre, ann = comp[:2], comp[2:]
    bc = next(q for q in cre if _spin(q) == 1) // 2
    ac = next(q for q in cre if _spin(q) == 0) // 2
    ba = next(q for q in ann if _spin(q) == 1) // 2
    aa = next(q for q in ann if _spin(q) == 0) // 2
    return [(bc, ac, ba, aa), (ba, aa, bc, ac)]


def _scheme_keep(comp: tuple, scheme: int) -> bool:
    if _spin(comp[0]) == _spin(comp[1]):
        return False  # schemes keep mixed-spin doubles only
    for bc, ac, ba, aa in _mixed_spatial_reps(comp):
        if scheme == 1 and bc >= ac:
            return True
        if scheme == 2 and bc >= ac and ac >= aa:
            return True
        if scheme == 3 and bc >= ac and ba >= aa:
            return True
    return False


def _single_entry(comp, flavor):
    return Excitation(flavor=flavor, components=(comp,), signs=(1,))


def _paired_entries(n_qubits: int):
    entries = []
    for p, q in _same_spin_pairs(n_qubits, spins=(0,)):
        flipped, sign = _flip((p, q))
        entries.append(
            Excitation(flavor="fermionic", components=((p, q), flipped), signs=(1, sign))
        )
    seen = set()
    for comp in _double_components(n_qubits, require_distinct=False):
        if comp in seen:
            continue
        flipped, sign = _flip(comp)
        seen.add(comp)
        seen.add(flipped)
        if flipped == comp:
            entries.append(Excitation(flavor="fermionic", components=(comp,), signs=(1,)))
        else:
            entries.append(
                Excitation(flavor="fermionic", components=(comp, flipped), signs=(1, sign))
            )
    return entries


def _pauli_entries(n_qubits: int):
    entries = []
    for q in range(n_qubits):
        for p in range(q):
            for y_at in (p, q):
                x = (1 << p) | (1 << q)
                entries.append(
                    Excitation(flavor="pauli", pauli=PauliString(x, 1 << y_at))
                )
    from itertools import combinations

    for quad in combinations(range(n_qubits), 4):
        x = 0
        for q in quad:
            x |= 1 << q
        for y_at in quad:
            entries.append(Excitation(flavor="pauli", pauli=PauliString(x, 1 << y_at)))
    return entries


def build_pool(kind: str, n_orbitals: int) -> Pool:
    """Construct the requested pool over ``n_orbitals`` spatial orbitals.

    Entry order is deterministic: singles before doubles, each group sorted
    by its index tuples (Pauli entries by word masks).
    """
    if kind not in POOL_KINDS:
        raise ValueError(f"unknown pool kind {kind!r}; expected one of {POOL_KINDS}")
    if n_orbitals < 1:
        raise ValueError("need at least one spatial orbital")
    n_qubits = 2 * n_orbitals

    if kind == "qubit-pauli":
        entries = _pauli_entries(n_qubits)
        entries.sort(key=lambda e: (e.pauli.weight, e.pauli.x, e.pauli.z))
        return Pool(kind, n_orbitals, entries)

    if kind == "fermionic-paired":
        entries = _paired_entries(n_qubits)
    elif kind == "fermionic-spin":
        singles = [_single_entry(c, "fermionic") for c in _same_spin_pairs(n_qubits)]
        doubles = [
            _single_entry(c, "fermionic")
            for c in _double_components(n_qubits, require_distinct=False)
        ]
        entries = singles + doubles
    else:
        spins = (0, 1) if kind in ("qeb", "qeb-scheme1") else (0,)
        singles = [_single_entry(c, "qubit") for c in _same_spin_pairs(n_qubits, spins)]
        doubles = [
            _single_entry(c, "qubit")
            for c in _double_components(n_qubits, require_distinct=True)
        ]
        if kind != "qeb":
            scheme = int(kind[-1])
            doubles = [d for d in doubles if _scheme_keep(d.components[0], scheme)]
        entries = singles + doubles

    entries.sort(key=lambda e: (len(e.components[0]), e.components))
    return Pool(kind, n_orbitals, entries)


# ----------------------------------------------------------------------
# CNOT accounting
# ----------------------------------------------------------------------
def _component_cost(comp: tuple, flavor: str) -> int:
    if len(comp) == 2:
        p, q = comp
        return 2 if flavor == "qubit" else 2 * (p - q) + 1
    p, q, r, s = comp
    return 13 if flavor == "qubit" else 2 * ((p - q) + (r - s)) + 9

def cnot_cost(exc: Excitation) -> int:
    """CNOT count for one entry under the compact circuit constructions."""
    if exc.flavor == "pauli":
        return 2 if exc.pauli.weight == 2 else 6
    return sum(_component_cost(c, exc.flavor) for c in exc.components)


def naive_cnot_cost(exc: Excitation) -> int:
    """CNOT count for the plain staircase-exponential construction.

    Each Pauli word in the excitation costs one CNOT per involved qubit:
    ``8 (p - q + r - s + 2)`` for a fermionic double, ``2 (p - q + 1)`` for a
    fermionic single.  Only defined for fermionic entries.
    """
    if exc.flavor != "fermionic":
        raise ValueError("naive construction is defined for fermionic excitations")
    total = 0
    for comp in exc.components:
        if len(comp) == 2:
            p, q = comp
            total += 2 * (p - q + 1)
        else:
            p, q, r, s = comp
            total += 8 * ((p - q) + (r - s) + 2)
    return total
