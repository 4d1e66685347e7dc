import json
import os
from functools import lru_cache

import numpy as np
import pytest

from spinadapt.integrals import read_fcidump

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name, filename="FCIDUMP"):
    return os.path.join(FIXTURE_DIR, name, filename)


@lru_cache(maxsize=None)
def load_fixture(name):
    """(MolecularIntegrals, constants dict) for a bundled fixture."""
    mi = read_fcidump(fixture_path(name))
    with open(fixture_path(name, "constants.json")) as fh:
        constants = json.load(fh)
    return mi, constants


def random_state(n_qubits, rng, sector=None):
    """Normalized random complex state, optionally confined to sector indices."""
    dim = 1 << n_qubits
    if sector is None:
        vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    else:
        vec = np.zeros(dim, dtype=complex)
        vec[sector] = rng.standard_normal(len(sector)) + 1j * rng.standard_normal(len(sector))
    return vec / np.linalg.norm(vec)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
