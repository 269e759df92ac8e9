"""
Epstein zeta function of two-dimensional lattices.

For a lattice with Gram matrix [[A, B], [B, C]],

    Z(s) = sum over (m, n) != 0 of (A m^2 + 2 B m n + C n^2)^(-s),

continued analytically to all s != 1 by the Chowla-Selberg series.
Punctured lattice sums of w f(|v|) with f ~ c |v|^-p differ from the
integral of f by w c Z(p/2); that difference is the diagonal
correction the pair sums subtract.
"""

import math

import numpy as np
from scipy import special

# Bessel series terms in each of k and n.
_SERIES_TERMS = 10

# Offset used to step over the removable singularity at s = 1/2.
_HALF_OFFSET = 1e-4

# Step for Z'(0).
_DERIVATIVE_STEP = 1e-5


def reduce_forms(A, B, C, max_iter=32):
    """
    Lagrange-Gauss reduction of quadratic forms, vectorized.

    Returns an equivalent (A, B, C) with 2|B| <= A <= C, which keeps
    the Bessel series short.
    """
    A, B, C = (np.array(v, dtype=float, copy=True) for v in (A, B, C))
    for _ in range(max_iter):
        swap = A > C
        A[swap], C[swap] = C[swap], A[swap].copy()
        mu = np.round(B / A)
        if not np.any(mu):
            break
        C = C - 2.0 * mu * B + mu**2 * A
        B = B - mu * A
    swap = A > C
    A[swap], C[swap] = C[swap], A[swap].copy()
    return A, B, C


def _chowla_selberg(A, B, C, s):
    delta = A * C - B**2
    root = np.sqrt(delta)
    rgamma_s = special.rgamma(s)

    first = 2.0 * A ** (-s) * special.zeta(2.0 * s)
    second = (
        2.0
        * math.sqrt(math.pi)
        * A ** (s - 1.0)
        * delta ** (0.5 - s)
        * special.gamma(s - 0.5)
        * special.zeta(2.0 * s - 1.0)
        * rgamma_s
    )

    series = np.zeros_like(A)
    ratio = root / A
    for k in range(1, _SERIES_TERMS + 1):
        for n in range(1, _SERIES_TERMS + 1):
            series += (
                (k / n) ** (s - 0.5)
                * np.cos(2.0 * math.pi * k * n * B / A)
                * special.kv(s - 0.5, 2.0 * math.pi * k * n * ratio)
            )
    third = 8.0 * math.pi**s * rgamma_s * A ** (-s) * (A / root) ** (s - 0.5) * series
    return first + second + third


def epstein_zeta(A, B, C, s):
    "Z(s) for arrays of forms (A, B, C); s != 1."
    if s == 1.0:
        raise ValueError("Z(s) has a pole at s = 1.")
    A, B, C = reduce_forms(A, B, C)
    if s == 0.0:
        return np.full_like(A, -1.0)
    if abs(s - 0.5) < _HALF_OFFSET:
        return 0.5 * (
            _chowla_selberg(A, B, C, 0.5 + _HALF_OFFSET)
            + _chowla_selberg(A, B, C, 0.5 - _HALF_OFFSET)
        )
    return _chowla_selberg(A, B, C, s)


def epstein_zeta_derivative_at_zero(A, B, C):
    "Z'(0) by a central difference."
    A, B, C = reduce_forms(A, B, C)
    h = _DERIVATIVE_STEP
    return (_chowla_selberg(A, B, C, h) - _chowla_selberg(A, B, C, -h)) / (2.0 * h)


def gram_matrices(edges):
    "(A, B, C) from lattice edges of shape (n, 2, 3)."
    e1, e2 = edges[:, 0, :], edges[:, 1, :]
    return (
        np.einsum("ij,ij->i", e1, e1),
        np.einsum("ij,ij->i", e1, e2),
        np.einsum("ij,ij->i", e2, e2),
    )
