"""The reference implementations deserve a few checks of their own."""

import numpy as np
import pytest

from spinadapt.fermions import FermionOperator, PauliSum
from spinadapt.oracles import (
    central_difference,
    dense_operator_matrix,
    finite_difference,
    gradient_by_differences,
)


def test_central_difference_orders():
    f = np.sin
    x0 = 0.7
    exact = np.cos(x0)
    err2 = abs(central_difference(f, x0, step=1e-3, order=2) - exact)
    err4 = abs(central_difference(f, x0, step=1e-3, order=4) - exact)
    assert err2 < 2e-7
    assert err4 < 1e-11  # five-point stencil shaves off ~step**2
    with pytest.raises(ValueError):
        central_difference(f, x0, order=3)


def test_gradient_by_differences_matches_analytic():
    a = np.array([0.3, -1.1, 2.0])

    def f(x):
        return float(np.sin(x) @ a + 0.5 * x @ x)

    x0 = np.array([0.2, 0.4, -0.6])
    grad = gradient_by_differences(f, x0)
    assert np.allclose(grad, a * np.cos(x0) + x0, atol=1e-9)
    assert finite_difference is gradient_by_differences


def test_dense_operator_matrix_dispatch():
    number_op = FermionOperator({((0, True), (0, False)): 1.0})
    m = dense_operator_matrix(number_op, 2)
    assert np.allclose(m, np.diag([0.0, 1.0, 0.0, 1.0]))

    zz = PauliSum.from_label("Z0 Z1")
    m = dense_operator_matrix(zz, 2)
    assert np.allclose(m, np.diag([1.0, -1.0, -1.0, 1.0]))

    with pytest.raises(ValueError, match="10 qubits"):
        dense_operator_matrix(number_op, 11)
