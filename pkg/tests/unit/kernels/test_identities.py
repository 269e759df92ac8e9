"""
Kernel identity tests.
"""

import math

import pytest

from perimflow.kernels.green import KernelContext
from perimflow.kernels.identities import (
    f_identity_residual,
    f_inverse_moment,
    f_mass,
    f_mass_drift,
    monotone_factor,
    normalization,
    potential_derivative_residual,
    richardson_derivative,
    second_derivative_residual,
    tail_integral_residual,
)

A_VALUES = (0.5, 1.0, 2.0)
R_VALUES = (0.5, 1.0, 2.0)


def test_richardson_derivative():
    "Central differences with one Richardson level."
    assert richardson_derivative(math.sin, 1.0) == pytest.approx(math.cos(1.0), rel=1e-9)
    assert richardson_derivative(math.exp, 2.0) == pytest.approx(math.exp(2.0), rel=1e-9)


@pytest.mark.parametrize("a", A_VALUES)
@pytest.mark.parametrize("r", R_VALUES)
def test_a_derivative_identities(a, r):
    """
    d/da (G_a/r^2) = H_a/r + (d/2 - 1) G_a/(a r^2);
    d/da (a^(3-d) d/da (G_a/r^2)) = a^(3-d) G_a;
    -a^2 d/da (G_a/r^2) = F_a/r.
    """
    ctx = KernelContext(3, a)
    assert potential_derivative_residual(ctx, r) < 1e-4, "first derivative"
    assert second_derivative_residual(ctx, r) < 1e-4, "second derivative"
    assert f_identity_residual(ctx, r) < 1e-4, "F identity"


@pytest.mark.parametrize("d", [4, 5])
def test_a_derivative_identities_higher_dimensions(d):
    "The same identities away from R^3."
    ctx = KernelContext(d, 1.5)
    for r in (0.4, 1.7):
        assert potential_derivative_residual(ctx, r) < 1e-4
        assert second_derivative_residual(ctx, r) < 1e-4
        assert f_identity_residual(ctx, r) < 1e-4


@pytest.mark.parametrize("d", [3, 4])
def test_monotone_factor_negative(d):
    "a^(3-d) d/da (G_a/r^2) < 0 everywhere."
    for a in (0.1, 1.0, 5.0):
        ctx = KernelContext(d, a)
        for r in (0.05, 1.0, 5.0):
            assert monotone_factor(ctx, r) < 0, f"d={d}, a={a}, r={r}"


@pytest.mark.parametrize("a", A_VALUES)
@pytest.mark.parametrize("r", R_VALUES)
def test_tail_integral(a, r):
    "int_a^inf G_s(r) ds = W_a(r) / r^(d-1)."
    assert tail_integral_residual(KernelContext(3, a), r) < 1e-6


@pytest.mark.parametrize("d", [3, 4])
@pytest.mark.parametrize("a", A_VALUES)
def test_normalization(d, a):
    "a^2 G_a has unit mass."
    assert abs(normalization(KernelContext(d, a)) - 1.0) < 1e-6


def test_f_mass_independent_of_a():
    "F_a = a^d F(a .) keeps its mass."
    assert f_mass_drift(3, A_VALUES) < 1e-4
    assert f_mass_drift(4, A_VALUES) < 1e-4
    assert f_mass(KernelContext(3, 1.0)) > 0


def test_f_inverse_moment():
    "int F/|y| = 1 in R^3, where F = G."
    assert f_inverse_moment(3) == pytest.approx(1.0, rel=1e-8)
