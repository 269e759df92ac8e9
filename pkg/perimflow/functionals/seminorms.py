"""
Fractional seminorms of the normal field on a surface in R^3.

All double sums exclude the diagonal and add the lattice-zeta
correction for the kernel's leading behavior there; errors come from
repeating the sum on the half-resolution surface.
"""

import math

import numpy as np

from perimflow.errors import DomainError
from perimflow.functionals.model import FunctionalValue, refined
from perimflow.quadrature.pairs import (
    PairKernel,
    SingularTerm,
    diagonal_correction,
    double_sums,
    local_coefficients,
    row_sums,
)


def _gagliardo_kernel(surface, r):
    power = 2.0 + 2.0 * r

    def evaluate(block):
        return block.dnu_sq / block.rho**power

    coeff = local_coefficients(surface).sq
    return PairKernel(f"gagliardo[{r}]", evaluate, (SingularTerm(coeff, 2.0 * r),))


def _abs_kernel(surface):
    def evaluate(block):
        return np.sqrt(block.dnu_sq) / block.rho_sq

    coeff = local_coefficients(surface).abs
    return PairKernel("abs", evaluate, (SingularTerm(coeff, 1.0),))


def _ff_kernel(surface, s):
    power = 3.0 + s

    def evaluate(block):
        # (nu_i - nu_j) . nu_i = |nu_i - nu_j|^2 / 2
        return 0.5 * block.dnu_sq / block.rho**power

    coeff = 0.5 * local_coefficients(surface).sq
    return PairKernel(f"ff[{s}]", evaluate, (SingularTerm(coeff, 1.0 + s),))


def _solid_angle_kernel(surface):
    def evaluate(block):
        # (x_j - x_i) . nu_j / rho^3
        return -block.proj_col / block.rho_sq

    coeff = 0.5 * local_coefficients(surface).curv
    return PairKernel("solid_angle", evaluate, (SingularTerm(coeff, 1.0),))


def _pairs(surface):
    return surface.size * (surface.size - 1)


def _double(surface, make_kernel, tag):
    kernel = make_kernel(surface)
    value = double_sums(surface, [kernel])[kernel.name]
    coarse = surface.coarsened()
    coarse_kernel = make_kernel(coarse)
    coarse_value = double_sums(coarse, [coarse_kernel])[coarse_kernel.name]
    return refined(value, coarse_value, _pairs(surface), tag)


def gagliardo_seminorm_sq(surface, r):
    """
    [nu]^2_r = int int |nu(x) - nu(y)|^2 / |x - y|^(2 + 2r) for r in
    [0, 1); r = 0 is the endpoint case.
    """
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must be in [0, 1), was {r}.")
    return _double(surface, lambda s: _gagliardo_kernel(s, r), f"gagliardo_sq(r={r})")


def abs_seminorm(surface):
    "int int |nu(x) - nu(y)| / |x - y|^2."
    return _double(surface, _abs_kernel, "abs_seminorm")


def frac_fundamental_form_sq(surface, s):
    """
    c^2_s(x_i) = int (nu(x_i) - nu(y)) . nu(x_i) / |x_i - y|^(3 + s) dy
    at every node, for s in (-1, 1).

    Each value's err is the size of its diagonal correction.
    """
    if not -1.0 < s < 1.0:
        raise DomainError(f"s must be in (-1, 1), was {s}.")
    kernel = _ff_kernel(surface, s)
    raw = row_sums(surface, [kernel], corrected=False)[kernel.name]
    corrected = raw + sum(diagonal_correction(surface, t) for t in kernel.singular)
    n = surface.size - 1
    return [
        FunctionalValue(float(c), abs(float(c - u)), n, f"c2(s={s})")
        for c, u in zip(corrected, raw)
    ]


def solid_angles(surface):
    """
    int (y - x_i) . nu(y) / |y - x_i|^3 dy at every node; 2 pi on any
    smooth closed surface.
    """
    kernel = _solid_angle_kernel(surface)
    return row_sums(surface, [kernel])[kernel.name]


def solid_angle_total(surface):
    "Area-weighted sum of the nodal solid angles, against 2 pi |dOmega|."
    return _double(surface, _solid_angle_kernel, "solid_angle")


def fundamental_form_total(values, surface):
    "2 sum_i w_i c^2_s(x_i), which equals [nu]^2 at r = (s + 1)/2."
    total = 2.0 * math.fsum(surface.weights * np.array([v.value for v in values]))
    err = 2.0 * math.fsum(surface.weights * np.array([v.err for v in values]))
    return FunctionalValue(total, err, surface.size, "2|c|^2")
