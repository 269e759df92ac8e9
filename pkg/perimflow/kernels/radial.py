"""
Radial kernels k_a(rho) = a^exponent * profile(a rho) on R^d.

Each kernel knows its mass over R^d and can draw radii from the law
proportional to |k_a(rho)| rho^(d-1), which is what the Monte Carlo
"shooting" estimators need: pick a point, a direction and a radius,
and count how often the far end leaves the domain.
"""

from dataclasses import dataclass, field
from functools import cached_property, partial
from typing import Callable

import numpy as np
from scipy import integrate

from perimflow.kernels.green import f_profile, g_profile, h_profile, sphere_area

_T_LOW = 1e-7
_T_HIGH = 80.0
_TABLE_SIZE = 6000


@dataclass(frozen=True, eq=False)
class RadialKernel:
    "Scaled radial kernel with a sampler for its radial law."

    name: str
    d: int
    profile: Callable = field(repr=False)
    exponent: float

    @cached_property
    def unit_mass(self):
        "Signed integral of profile(|y|) over R^d."
        value, _ = integrate.quad(
            lambda t: float(self.profile(np.array([t]))[0]) * t ** (self.d - 1),
            0.0,
            np.inf,
            epsabs=0.0,
            epsrel=1e-10,
            limit=400,
        )
        return sphere_area(self.d) * value

    def mass(self, a):
        "Integral of k_a over R^d."
        return a ** (self.exponent - self.d) * self.unit_mass

    @property
    def sign(self):
        "The profile does not change sign; this is that sign."
        return 1.0 if self.unit_mass >= 0 else -1.0

    @cached_property
    def _table(self):
        t = np.concatenate(([0.0], np.geomspace(_T_LOW, _T_HIGH, _TABLE_SIZE)))
        density = np.empty_like(t)
        density[1:] = np.abs(self.profile(t[1:])) * t[1:] ** (self.d - 1)
        density[0] = density[1]
        cdf = integrate.cumulative_trapezoid(density, t, initial=0.0)
        cdf /= cdf[-1]
        return cdf, t

    def sample_radii(self, uniforms, a):
        "Map uniforms on [0,1) to radii distributed like |k_a| rho^(d-1)."
        cdf, t = self._table
        return np.interp(np.asarray(uniforms, dtype=float), cdf, t) / a


def _f_over_t(d, t):
    return f_profile(d, t) / t


def _potential_derivative(d, t):
    # d/da (G_a/rho^2) = a^(d-1) [H(t)/t + (d/2 - 1) G(t)/t^2]
    return h_profile(d, t) / t + (d / 2.0 - 1.0) * g_profile(d, t) / t**2


def perimeter_kernel(d):
    "a^2 G_a, unit mass."
    return RadialKernel("a2G", d, partial(g_profile, d), float(d))


def solid_f_kernel(d):
    "F_a/rho, mass a * int F/|y|."
    return RadialKernel("F/rho", d, partial(_f_over_t, d), float(d + 1))


def potential_derivative_kernel(d):
    "d/da (G_a/rho^2), negative, mass -int F/|y| / a."
    return RadialKernel("dG/rho2", d, partial(_potential_derivative, d), float(d - 1))


def tail_mass(kernel, a, radius):
    """
    Mass of |k_a| outside the ball of the given radius, by quadrature of
    the radial law.  Used as an analytic bound on truncation error.
    """
    t0 = a * radius

    def integrand(t):
        return abs(float(kernel.profile(np.array([t]))[0])) * t ** (kernel.d - 1)

    value, _ = integrate.quad(integrand, t0, t0 + 80.0, epsabs=0.0, epsrel=1e-8, limit=200)
    return a ** (kernel.exponent - kernel.d) * sphere_area(kernel.d) * value
