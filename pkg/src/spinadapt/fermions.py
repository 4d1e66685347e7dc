"""Second-quantized fermionic operators and their qubit images.

This module provides the small operator algebra everything else is built on:

* :class:`FermionOperator` -- sparse linear combinations of normal-ordered
  ladder-operator products, with exact anticommutation bookkeeping.
* :class:`PauliString` / :class:`PauliSum` -- Pauli words stored as a pair of
  bitmasks (X part, Z part) and sparse linear combinations of them.
* :func:`jordan_wigner` -- the Jordan-Wigner transform under the convention
  used throughout the package: qubit ``q`` holds the occupation of spin
  orbital ``q``, bit ``q`` of a basis-state index is that occupation
  (little-endian), and spatial orbital ``p`` maps to qubits ``2p`` (alpha)
  and ``2p + 1`` (beta).
* :func:`excitation_generator` -- anti-Hermitian generators
  ``T - T^dagger`` for arbitrary creation/annihilation index lists.

The normal-ordered form puts creation operators to the left of annihilation
operators, each group sorted by descending mode index.  Repeated creation
(or annihilation) of the same mode collapses to zero, and contractions from
reordering are kept exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FermionOperator",
    "PauliString",
    "PauliSum",
    "jordan_wigner",
    "strip_z",
    "excitation_generator",
    "normal_ordered",
]

# Terms whose coefficient magnitude falls below this are dropped on compress().
_PRUNE_TOL = 1e-14


class FermionOperator:
    """A linear combination of products of fermionic ladder operators.

    Terms are stored normal ordered in a dict mapping
    ``((mode, is_creation), ...)`` tuples to complex coefficients.  The empty
    tuple is the identity.  Construction through :meth:`from_ladder` accepts
    an arbitrary operator ordering and reorders it with the correct signs and
    contractions.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[tuple, complex] = dict(terms) if terms else {}

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls) -> "FermionOperator":
        return cls()

    @classmethod
    def identity(cls, coeff: complex = 1.0) -> "FermionOperator":
        return cls({(): complex(coeff)})

    @classmethod
    def from_ladder(cls, ops, coeff: complex = 1.0) -> "FermionOperator":
        """Build from a sequence of ``(mode, is_creation)`` factors.

        The factors are interpreted as an operator product read left to
        right, i.e. ``[(3, True), (1, False)]`` is ``a^dag_3 a_1``.
        """
        out: dict[tuple, complex] = {}
        _reorder(tuple((int(m), bool(d)) for m, d in ops), complex(coeff), out)
        op = cls(out)
        op.compress()
        return op

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------
    def __add__(self, other):
        if np.isscalar(other):
            other = FermionOperator.identity(other)
        out = dict(self.terms)
        for term, c in other.terms.items():
            out[term] = out.get(term, 0.0) + c
        result = FermionOperator(out)
        result.compress()
        return result

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, other):
        if np.isscalar(other):
            return FermionOperator({t: c * other for t, c in self.terms.items()})
        out: dict[tuple, complex] = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                _reorder(t1 + t2, c1 * c2, out)
        result = FermionOperator(out)
        result.compress()
        return result

    def __rmul__(self, other):
        if np.isscalar(other):
            return self.__mul__(other)
        return NotImplemented

    def dagger(self) -> "FermionOperator":
        """Hermitian conjugate (reverses factors, flips dagger flags)."""
        out: dict[tuple, complex] = {}
        for term, c in self.terms.items():
            flipped = tuple((m, not d) for m, d in reversed(term))
            _reorder(flipped, np.conj(c), out)
        result = FermionOperator(out)
        result.compress()
        return result

    def compress(self, tol: float = _PRUNE_TOL) -> "FermionOperator":
        """Drop terms with coefficient magnitude below ``tol`` (in place)."""
        for term in [t for t, c in self.terms.items() if abs(c) < tol]:
            del self.terms[term]
        return self

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------
    @property
    def n_modes(self) -> int:
        """One plus the largest mode index appearing in any term."""
        return max((m + 1 for t in self.terms for m, _ in t), default=0)

    def is_anti_hermitian(self, tol: float = 1e-12) -> bool:
        return (self + self.dagger()).max_abs_coeff() < tol

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return (self - self.dagger()).max_abs_coeff() < tol

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FermionOperator):
            return NotImplemented
        return (self - other).max_abs_coeff() < _PRUNE_TOL

    def __hash__(self):  # pragma: no cover - dict key use is not supported
        raise TypeError("FermionOperator is not hashable")

    def __repr__(self):
        if not self.terms:
            return "FermionOperator(0)"
        bits = []
        for term, c in sorted(self.terms.items()):
            word = " ".join(f"a{'+' if d else ''}{m}" for m, d in term) or "1"
            bits.append(f"({c:+.6g}) {word}")
        return "FermionOperator(" + " + ".join(bits) + ")"


def _reorder(ops: tuple, coeff: complex, out: dict) -> None:
    """Accumulate ``coeff * ops`` into ``out`` in normal-ordered form."""
    if coeff == 0.0:
        return
    for i in range(len(ops) - 1):
        (m1, d1), (m2, d2) = ops[i], ops[i + 1]
        if (not d1) and d2:
            # a_m1 a^dag_m2 = delta - a^dag_m2 a_m1
            swapped = ops[:i] + (ops[i + 1], ops[i]) + ops[i + 2:]
            _reorder(swapped, -coeff, out)
            if m1 == m2:
                _reorder(ops[:i] + ops[i + 2:], coeff, out)
            return
        if d1 == d2:
            if m1 == m2:
                return  # nilpotent
            if m1 < m2:
                swapped = ops[:i] + (ops[i + 1], ops[i]) + ops[i + 2:]
                _reorder(swapped, -coeff, out)
                return
    out[ops] = out.get(ops, 0.0) + coeff


def normal_ordered(ops, coeff: complex = 1.0) -> FermionOperator:
    """Convenience wrapper around :meth:`FermionOperator.from_ladder`."""
    return FermionOperator.from_ladder(ops, coeff)


def excitation_generator(creation, annihilation, coeff: complex = 1.0) -> FermionOperator:
    """Anti-Hermitian generator ``T - T^dagger`` for an excitation.

    ``T`` is the literal product ``a^dag_{c1} a^dag_{c2} ... a_{n1} a_{n2}
    ...`` with the creation and annihilation indices read left to right as
    given.  Repeated indices are allowed (they produce number-operator
    weighted excitations of lower rank).
    """
    ladder = [(m, True) for m in creation] + [(m, False) for m in annihilation]
    t = FermionOperator.from_ladder(ladder, coeff)
    return (t - t.dagger()).compress()


# ----------------------------------------------------------------------
# Pauli strings
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class PauliString:
    """A Pauli word encoded by X/Z bitmasks.

    Qubit ``q`` carries X when bit ``q`` of ``x`` is set, Z when bit ``q`` of
    ``z`` is set, and Y when both are.  The represented operator is the
    standard Hermitian word (each Y carries its usual phase); the sign or any
    complex weight lives in the enclosing :class:`PauliSum` coefficient.
    """

    x: int
    z: int

    @property
    def weight(self) -> int:
        return int(self.x | self.z).bit_count()

    @property
    def n_y(self) -> int:
        return int(self.x & self.z).bit_count()

    def support(self) -> tuple[int, ...]:
        mask = self.x | self.z
        return tuple(q for q in range(mask.bit_length()) if (mask >> q) & 1)

    def label(self) -> str:
        if not (self.x | self.z):
            return "I"
        out = []
        for q in self.support():
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            out.append(f"{'XZY'[xb + 2 * zb - 1]}{q}")
        return " ".join(out)

    def __repr__(self):
        return f"PauliString({self.label()})"


def _compose(a: PauliString, b: PauliString) -> tuple[PauliString, complex]:
    """Product ``a * b`` as (string, phase)."""
    x, z = a.x ^ b.x, a.z ^ b.z
    # Each word is i^{n_Y} X^x Z^z; commuting a.z past b.x gives the sign.
    k = (a.n_y + b.n_y - int(x & z).bit_count()) % 4
    phase = (1j) ** k
    if int(a.z & b.x).bit_count() & 1:
        phase = -phase
    return PauliString(x, z), phase


_IDENTITY = PauliString(0, 0)

_LETTER_TO_MASKS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class PauliSum:
    """Sparse complex linear combination of :class:`PauliString` words."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[PauliString, complex] = dict(terms) if terms else {}

    @classmethod
    def zero(cls) -> "PauliSum":
        return cls()

    @classmethod
    def identity(cls, coeff: complex = 1.0) -> "PauliSum":
        return cls({_IDENTITY: complex(coeff)})

    @classmethod
    def from_label(cls, label: str, coeff: complex = 1.0) -> "PauliSum":
        """Parse labels like ``"X0 Y3 Z5"`` (``"I"`` for the identity)."""
        x = z = 0
        label = label.strip()
        if label and label != "I":
            for token in label.split():
                letter, q = token[0].upper(), int(token[1:])
                if letter not in _LETTER_TO_MASKS:
                    raise ValueError(f"bad Pauli letter in {token!r}")
                xb, zb = _LETTER_TO_MASKS[letter]
                if (x | z) >> q & 1:
                    raise ValueError(f"qubit {q} given twice in {label!r}")
                x |= xb << q
                z |= zb << q
        return cls({PauliString(x, z): complex(coeff)})

    # ------------------------------------------------------------------
    def __add__(self, other):
        if np.isscalar(other):
            other = PauliSum.identity(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0.0) + c
        result = PauliSum(out)
        result.compress()
        return result

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, other):
        if np.isscalar(other):
            return PauliSum({s: c * other for s, c in self.terms.items()})
        out: dict[PauliString, complex] = {}
        for s1, c1 in self.terms.items():
            for s2, c2 in other.terms.items():
                s12, phase = _compose(s1, s2)
                out[s12] = out.get(s12, 0.0) + c1 * c2 * phase
        result = PauliSum(out)
        result.compress()
        return result

    def __rmul__(self, other):
        if np.isscalar(other):
            return self.__mul__(other)
        return NotImplemented

    def dagger(self) -> "PauliSum":
        return PauliSum({s: np.conj(c) for s, c in self.terms.items()})

    def compress(self, tol: float = _PRUNE_TOL) -> "PauliSum":
        for s in [s for s, c in self.terms.items() if abs(c) < tol]:
            del self.terms[s]
        return self

    # ------------------------------------------------------------------
    @property
    def n_qubits(self) -> int:
        bits = 0
        for s in self.terms:
            bits |= s.x | s.z
        return bits.bit_length()

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return (self - self.dagger()).max_abs_coeff() < tol

    def is_anti_hermitian(self, tol: float = 1e-12) -> bool:
        return (self + self.dagger()).max_abs_coeff() < tol

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return (self - other).max_abs_coeff() < _PRUNE_TOL

    def __hash__(self):  # pragma: no cover
        raise TypeError("PauliSum is not hashable")

    def __repr__(self):
        if not self.terms:
            return "PauliSum(0)"
        bits = [
            f"({c:+.6g}) {s.label()}"
            for s, c in sorted(self.terms.items(), key=lambda kv: (kv[0].x, kv[0].z))
        ]
        return "PauliSum(" + " + ".join(bits) + ")"


def strip_z(psum: PauliSum) -> PauliSum:
    """Remove every plain-Z letter from every word, keeping coefficients.

    Y letters survive (their Z half is part of the letter itself); only the
    qubits acted on by a bare Z are released.  Applied to the image of a
    fermionic excitation this yields the corresponding qubit excitation.
    """
    out: dict[PauliString, complex] = {}
    for s, c in psum.terms.items():
        stripped = PauliString(s.x, s.z & s.x)
        out[stripped] = out.get(stripped, 0.0) + c
    result = PauliSum(out)
    result.compress()
    return result


# ----------------------------------------------------------------------
# Jordan-Wigner transform
# ----------------------------------------------------------------------
def _jw_ladder(mode: int, creation: bool) -> PauliSum:
    chain = (1 << mode) - 1
    x_word = PauliString(1 << mode, chain)
    y_word = PauliString(1 << mode, chain | (1 << mode))
    y_coeff = -0.5j if creation else 0.5j
    return PauliSum({x_word: 0.5, y_word: y_coeff})


def jordan_wigner(op: FermionOperator) -> PauliSum:
    """Map a :class:`FermionOperator` to qubits.

    Mode ``p`` becomes ``(X_p -/+ i Y_p)/2`` (creation/annihilation) dressed
    with ``Z`` on every qubit below ``p``.  The map is an algebra
    homomorphism, which the tests verify against dense matrices built
    directly from ladder-operator action.
    """
    total = PauliSum.zero()
    for term, coeff in op.terms.items():
        prod = PauliSum.identity(coeff)
        for mode, dagger in term:
            prod = prod * _jw_ladder(mode, dagger)
        total = total + prod
    return total.compress()
