"""
Epstein zeta tests.
"""

import math

import numpy as np
import pytest

from perimflow.quadrature.lattice import (
    epstein_zeta,
    epstein_zeta_derivative_at_zero,
    gram_matrices,
    reduce_forms,
)


def _z(A, B, C, s):
    return float(epstein_zeta(np.array([A]), np.array([B]), np.array([C]), s)[0])


def test_square_lattice():
    "Z(2) = 4 zeta(2) beta(2) for m^2 + n^2."
    assert _z(1.0, 0.0, 1.0, 2.0) == pytest.approx(6.0268120, rel=1e-6)


def test_hexagonal_lattice():
    "Z(2) = 6 zeta(2) L(2, chi_-3) for m^2 + m n + n^2."
    assert _z(1.0, 0.5, 1.0, 2.0) == pytest.approx(7.7111458, rel=1e-5)


def test_value_at_zero():
    "Z(0) = -1 for every lattice."
    values = epstein_zeta(np.array([1.0, 2.0]), np.array([0.0, 0.3]), np.array([1.0, 5.0]), 0.0)
    assert np.allclose(values, -1.0)


def test_pole_at_one():
    "s = 1 is refused."
    with pytest.raises(ValueError, match="pole at s = 1"):
        _z(1.0, 0.0, 1.0, 1.0)


def test_functional_equation():
    "pi^-s Gamma(s) Z(s) is symmetric under s -> 1 - s for the square lattice."
    s = 1.3
    z_s = _z(1.0, 0.0, 1.0, s)
    z_reflected = _z(1.0, 0.0, 1.0, 1.0 - s)
    lhs = math.pi**-s * math.gamma(s) * z_s
    rhs = math.pi ** -(1.0 - s) * math.gamma(1.0 - s) * z_reflected
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_basis_change_invariance():
    "Equivalent forms give the same sum."
    square = _z(1.0, 0.0, 1.0, 0.75)
    for form in ((1.0, 1.0, 2.0), (1.0, 2.0, 5.0), (5.0, -2.0, 1.0)):
        assert _z(*form, 0.75) == pytest.approx(square, rel=1e-10), f"{form}"


def test_scaling():
    "Z of lambda Q is lambda^-s Z of Q."
    assert _z(4.0, 0.0, 4.0, 1.25) == pytest.approx(4**-1.25 * _z(1.0, 0.0, 1.0, 1.25), rel=1e-10)


def test_half_is_continuous():
    "The removable singularity at s = 1/2 is stepped over."
    mid = _z(1.0, 0.2, 2.0, 0.5)
    near = [_z(1.0, 0.2, 2.0, 0.5 + d) for d in (-1e-2, 1e-2)]
    assert mid == pytest.approx(0.5 * sum(near), rel=1e-3)


def test_derivative_at_zero_scaling():
    "Z'(0) of lambda Q is Z'(0) of Q plus log lambda."
    args = [np.array([v]) for v in (1.0, 0.0, 1.0)]
    scaled = [np.array([v]) for v in (4.0, 0.0, 4.0)]
    base = float(epstein_zeta_derivative_at_zero(*args)[0])
    other = float(epstein_zeta_derivative_at_zero(*scaled)[0])
    assert other - base == pytest.approx(math.log(4.0), rel=1e-6)


def test_reduce_forms():
    "Lagrange-Gauss reduction gives 2|B| <= A <= C."
    A, B, C = reduce_forms([1.0, 5.0], [1.0, 4.0], [2.0, 4.0])
    assert np.allclose(A, [1.0, 1.0])
    assert np.allclose(B, [0.0, 0.0])
    assert np.allclose(C, [1.0, 4.0])
    assert np.allclose(A * C - B**2, [1.0, 4.0]), "determinant preserved"


def test_gram_matrices():
    "(A, B, C) from two edge vectors per node."
    edges = np.array([[[1.0, 0.0, 0.0], [1.0, 2.0, 0.0]]])
    A, B, C = gram_matrices(edges)
    assert (A[0], B[0], C[0]) == (1.0, 1.0, 5.0)
