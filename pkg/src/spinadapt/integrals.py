"""Molecular integral containers and file formats.

Integrals arrive in FCIDUMP files: a namelist header (``NORB``, ``NELEC``,
``MS2``, optionally ``ORBSYM``/``ISYM``) followed by ``value i j k l``
records with 1-based indices, chemists' notation ``(ij|kl)``, and the full
8-fold permutation symmetry folded to unique entries.  ``i j 0 0`` records
are one-electron integrals and the ``0 0 0 0`` record is the scalar core
energy.  Property (dipole) integrals use the same record grammar with
``# DIPOLE X|Y|Z`` block tags and a ``# NUCLEAR x y z`` trailer.

The package assumes fixture orbitals are canonical RHF orbitals ordered by
energy; that is verified downstream (Fock diagonality checks), never
produced here -- there is deliberately no SCF solver in the library.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MolecularIntegrals",
    "DipoleIntegrals",
    "parse_fcidump",
    "read_fcidump",
    "write_fcidump",
    "freeze_core",
    "parse_property_integrals",
    "write_property_integrals",
    "spin_orbital_oei",
    "spin_orbital_antisymmetrized_eri",
    "hf_occupation",
    "hf_energy",
]


@dataclass
class MolecularIntegrals:
    """Spatial-orbital integrals plus electron bookkeeping.

    ``h`` is the one-electron matrix, ``eri`` the two-electron tensor in
    chemists' notation ``eri[p, q, r, s] = (pq|rs)``, both over ``n_orb``
    spatial orbitals.  ``e_core`` collects the nuclear repulsion plus any
    folded frozen-core energy.
    """

    e_core: float
    h: np.ndarray
    eri: np.ndarray
    n_elec: int
    ms2: int = 0
    orbsym: tuple = field(default=None)

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        self.eri = np.asarray(self.eri, dtype=float)
        n = self.h.shape[0]
        if self.h.shape != (n, n) or self.eri.shape != (n, n, n, n):
            raise ValueError("inconsistent integral shapes")

    @property
    def n_orb(self) -> int:
        return self.h.shape[0]

    @property
    def n_alpha(self) -> int:
        return (self.n_elec + self.ms2) // 2

    @property
    def n_beta(self) -> int:
        return (self.n_elec - self.ms2) // 2


@dataclass
class DipoleIntegrals:
    """Cartesian dipole matrices over spatial orbitals plus nuclear part."""

    components: np.ndarray  # shape (3, n_orb, n_orb)
    nuclear: np.ndarray     # shape (3,)

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=float)
        self.nuclear = np.asarray(self.nuclear, dtype=float)
        if self.components.ndim != 3 or self.components.shape[0] != 3:
            raise ValueError("expected three dipole component matrices")
        if self.nuclear.shape != (3,):
            raise ValueError("nuclear dipole must have three components")


_FLOAT = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eEdD][-+]?\d+)?"


def _to_float(token: str) -> float:
    return float(token.replace("D", "E").replace("d", "e"))


def _parse_header(header_text: str) -> dict:
    text = re.sub(r"&FCI|&END|\$END|^\s*/\s*$", " ", header_text, flags=re.I | re.M)
    text = text.replace("/", " ")
    fields = {}
    for match in re.finditer(r"([A-Za-z]\w*)\s*=\s*([^=]+?)(?=,?\s*[A-Za-z]\w*\s*=|$)", text, re.S):
        key = match.group(1).upper()
        values = [v for v in re.split(r"[,\s]+", match.group(2).strip()) if v]
        fields[key] = values
    return fields


def parse_fcidump(text: str) -> MolecularIntegrals:
    """Parse FCIDUMP content into :class:`MolecularIntegrals`."""
    lines = text.splitlines()
    header_lines, body_start = [], None
    for ln, line in enumerate(lines):
        header_lines.append(line)
        stripped = line.strip()
        if "&END" in stripped.upper() or "$END" in stripped.upper() or stripped.endswith("/"):
            body_start = ln + 1
            break
    if body_start is None:
        raise ValueError("FCIDUMP header never terminated (&END or / missing)")

    fields = _parse_header("\n".join(header_lines))
    try:
        n_orb = int(fields["NORB"][0])
        n_elec = int(fields["NELEC"][0])
    except KeyError as exc:
        raise ValueError(f"FCIDUMP header missing {exc.args[0]}") from None
    ms2 = int(fields.get("MS2", ["0"])[0])
    orbsym = tuple(int(v) for v in fields["ORBSYM"]) if "ORBSYM" in fields else None

    h = np.zeros((n_orb, n_orb))
    eri = np.zeros((n_orb, n_orb, n_orb, n_orb))
    e_core = 0.0
    for ln in range(body_start, len(lines)):
        tokens = lines[ln].split()
        if not tokens:
            continue
        if len(tokens) != 5:
            raise ValueError(f"FCIDUMP line {ln + 1}: expected 'value i j k l', got {lines[ln]!r}")
        try:
            value = _to_float(tokens[0])
            i, j, k, l = (int(t) for t in tokens[1:])
        except ValueError:
            raise ValueError(f"FCIDUMP line {ln + 1}: malformed record {lines[ln]!r}") from None
        if max(i, j, k, l) > n_orb or min(i, j, k, l) < 0:
            raise ValueError(f"FCIDUMP line {ln + 1}: orbital index out of range")
        if i == 0:
            e_core = value
        elif k == 0:
            h[i - 1, j - 1] = h[j - 1, i - 1] = value
        else:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in (
                (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
            ):
                eri[a, b, c, d] = value
    return MolecularIntegrals(e_core, h, eri, n_elec, ms2, orbsym)


def read_fcidump(path) -> MolecularIntegrals:
    with open(path) as fh:
        return parse_fcidump(fh.read())


def write_fcidump(mi: MolecularIntegrals, path=None, tol: float = 1e-14) -> str:
    """Serialize to FCIDUMP text (canonical unique records); round-trips."""
    n = mi.n_orb
    out = [f"&FCI NORB={n},NELEC={mi.n_elec},MS2={mi.ms2},"]
    if mi.orbsym is not None:
        out.append(" ORBSYM=" + ",".join(str(s) for s in mi.orbsym) + ",")
    out.append(" ISYM=1,")
    out.append("&END")

    def rec(v, i, j, k, l):
        out.append(f"{v: .16E} {i:3d} {j:3d} {k:3d} {l:3d}")

    for p in range(n):
        for q in range(p + 1):
            for r in range(p + 1):
                s_max = q if r == p else r
                for s in range(s_max + 1):
                    v = mi.eri[p, q, r, s]
                    if abs(v) > tol:
                        rec(v, p + 1, q + 1, r + 1, s + 1)
    for p in range(n):
        for q in range(p + 1):
            if abs(mi.h[p, q]) > tol:
                rec(mi.h[p, q], p + 1, q + 1, 0, 0)
    rec(mi.e_core, 0, 0, 0, 0)
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def freeze_core(mi: MolecularIntegrals, n_frozen: int) -> MolecularIntegrals:
    """Fold the lowest ``n_frozen`` (doubly occupied) orbitals into the core.

    The frozen orbitals' Coulomb/exchange field is absorbed into the active
    one-electron integrals and their mean-field energy into ``e_core``; the
    returned active-space integrals drop the frozen rows entirely.
    """
    nf = int(n_frozen)
    if nf == 0:
        return MolecularIntegrals(mi.e_core, mi.h.copy(), mi.eri.copy(), mi.n_elec, mi.ms2)
    if nf < 0 or 2 * nf > mi.n_elec:
        raise ValueError("cannot freeze more electron pairs than are present")
    core = slice(0, nf)
    e_core = (
        mi.e_core
        + 2.0 * np.trace(mi.h[core, core])
        + 2.0 * np.einsum("iijj->", mi.eri[core, core, core, core])
        - np.einsum("ijji->", mi.eri[core, core, core, core])
    )
    h_eff = (
        mi.h
        + 2.0 * np.einsum("pqii->pq", mi.eri[:, :, core, core])
        - np.einsum("piiq->pq", mi.eri[:, core, core, :])
    )
    act = slice(nf, mi.n_orb)
    return MolecularIntegrals(
        float(e_core),
        h_eff[act, act],
        mi.eri[act, act, act, act],
        mi.n_elec - 2 * nf,
        mi.ms2,
    )


# ----------------------------------------------------------------------
# spin-orbital expansion (interleaved: alpha = 2p, beta = 2p + 1)
# ----------------------------------------------------------------------
def spin_orbital_oei(h: np.ndarray) -> np.ndarray:
    n = h.shape[0]
    h_so = np.zeros((2 * n, 2 * n))
    h_so[0::2, 0::2] = h
    h_so[1::2, 1::2] = h
    return h_so


def spin_orbital_antisymmetrized_eri(eri: np.ndarray) -> np.ndarray:
    """Antisymmetrized physicists' tensor ``<PQ||RS>`` over spin orbitals."""
    n = eri.shape[0]
    m = 2 * n
    coul = np.zeros((m, m, m, m))
    phys = eri.transpose(0, 2, 1, 3)  # <pq|rs> = (pr|qs)
    for sp in (0, 1):
        for sq in (0, 1):
            coul[sp::2, sq::2, sp::2, sq::2] = phys
    return coul - coul.transpose(0, 1, 3, 2)


def hf_occupation(n_alpha: int, n_beta: int) -> list[int]:
    """Occupied qubits of the aufbau reference determinant."""
    return [2 * p for p in range(n_alpha)] + [2 * p + 1 for p in range(n_beta)]


def hf_energy(mi: MolecularIntegrals) -> float:
    """Mean-field energy of the aufbau determinant (general spin pattern)."""
    occ = hf_occupation(mi.n_alpha, mi.n_beta)
    h_so = spin_orbital_oei(mi.h)
    g = spin_orbital_antisymmetrized_eri(mi.eri)
    e = mi.e_core + sum(h_so[p, p] for p in occ)
    e += 0.5 * sum(g[p, q, p, q] for p in occ for q in occ)
    return float(e)


# ----------------------------------------------------------------------
# property integrals
# ----------------------------------------------------------------------
def parse_property_integrals(text: str, n_orb: int) -> DipoleIntegrals:
    """Parse dipole blocks (``# DIPOLE X|Y|Z`` + records, ``# NUCLEAR`` trailer)."""
    comps = np.zeros((3, n_orb, n_orb))
    nuclear = np.zeros(3)
    component = None
    axis_index = {"X": 0, "Y": 1, "Z": 2}
    for ln, line in enumerate(text.splitlines()):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            tokens = stripped[1:].split()
            if tokens and tokens[0].upper() == "DIPOLE":
                if len(tokens) != 2 or tokens[1].upper() not in axis_index:
                    raise ValueError(f"line {ln + 1}: bad dipole tag {stripped!r}")
                component = axis_index[tokens[1].upper()]
            elif tokens and tokens[0].upper() == "NUCLEAR":
                if len(tokens) != 4:
                    raise ValueError(f"line {ln + 1}: bad nuclear tag {stripped!r}")
                nuclear = np.array([_to_float(t) for t in tokens[1:]])
                component = None
            else:
                raise ValueError(f"line {ln + 1}: unknown tag {stripped!r}")
            continue
        if component is None:
            raise ValueError(f"line {ln + 1}: record outside of a dipole block")
        tokens = stripped.split()
        if len(tokens) != 5 or tokens[3] != "0" or tokens[4] != "0":
            raise ValueError(f"line {ln + 1}: expected 'value i j 0 0'")
        value = _to_float(tokens[0])
        i, j = int(tokens[1]) - 1, int(tokens[2]) - 1
        if not (0 <= i < n_orb and 0 <= j < n_orb):
            raise ValueError(f"line {ln + 1}: orbital index out of range")
        comps[component, i, j] = comps[component, j, i] = value
    return DipoleIntegrals(comps, nuclear)


def write_property_integrals(dip: DipoleIntegrals, path=None, tol: float = 1e-14) -> str:
    out = []
    for axis, name in enumerate("XYZ"):
        out.append(f"# DIPOLE {name}")
        mat = dip.components[axis]
        for i in range(mat.shape[0]):
            for j in range(i + 1):
                if abs(mat[i, j]) > tol:
                    out.append(f"{mat[i, j]: .16E} {i + 1:3d} {j + 1:3d}   0   0")
    nx, ny, nz = dip.nuclear
    out.append(f"# NUCLEAR {nx:.16E} {ny:.16E} {nz:.16E}")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
