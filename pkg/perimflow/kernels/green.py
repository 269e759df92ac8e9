"""
Bessel-potential kernels on R^d and their constants.

With order = d/2 - 1 and c_d = (2 pi)^(-d/2):

  G(t) = c_d t^(1-d/2) K_order(t)       G_a(r) = a^(d-2) G(a r)
  H(t) = c_d t^(1-d/2) K'_order(t)      H_a(r) = a^(d-2) H(a r)
  W(t) = c_d int_t^inf s^order K_order(s) ds      W_a(r) = W(a r)
  F(t) = (1 - d/2) G(t)/t - H(t)        F_a(r) = a^d F(a r)

G_a is the fundamental solution of -Laplace + a^2 and a^2 G_a has
unit mass.  Scalar functions return a KernelValue; the *_array
methods of KernelContext are the vectorized fast path.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre
from scipy import integrate, special

from perimflow.errors import AccuracyError, DomainError
from perimflow.kernels.bessel import (
    KernelValue,
    bessel_k,
    bessel_k_prime,
    bessel_k_array,
    bessel_k_prime_array,
)

# Width of the window used for the W integral, see bessel._CUTOFF.
_W_WINDOW = 40.0
_W_NODES, _W_WEIGHTS = legendre.leggauss(96)


def sphere_area(d):
    "|S^(d-1)| = 2 pi^(d/2) / Gamma(d/2)."
    return 2.0 * math.pi ** (d / 2.0) / special.gamma(d / 2.0)


def _norm(d):
    return (2.0 * math.pi) ** (-d / 2.0)


@dataclass(frozen=True)
class KernelContext:
    """
    Dimension d, Helmholtz parameter a and kernel tolerance.

    Immutable, so a context can be shared between threads and used
    as a cache key.
    """

    d: int
    a: float
    rel_tol: float = 1e-10

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"d must be an integer >= 2, was {self.d}.")
        if not self.a > 0:
            raise DomainError(f"a must be > 0, was {self.a}.")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, was {self.rel_tol}.")

    @property
    def order(self):
        "Bessel order d/2 - 1."
        return self.d / 2.0 - 1.0

    def with_a(self, a):
        "Same dimension and tolerance, different a."
        return KernelContext(self.d, a, self.rel_tol)

    def g_array(self, r):
        "G_a on an array of radii."
        return self.a ** (self.d - 2) * g_profile(self.d, self.a * np.asarray(r))

    def h_array(self, r):
        "H_a on an array of radii."
        return self.a ** (self.d - 2) * h_profile(self.d, self.a * np.asarray(r))

    def w_array(self, r):
        "W_a on an array of radii."
        return w_profile(self.d, self.a * np.asarray(r))

    def f_array(self, r):
        "F_a on an array of radii."
        return self.a**self.d * f_profile(self.d, self.a * np.asarray(r))


def g_profile(d, t):
    "G(t) for an array t > 0."
    t = np.asarray(t, dtype=float)
    return _norm(d) * t ** (1.0 - d / 2.0) * bessel_k_array(d / 2.0 - 1.0, t)


def h_profile(d, t):
    "H(t) for an array t > 0."
    t = np.asarray(t, dtype=float)
    return _norm(d) * t ** (1.0 - d / 2.0) * bessel_k_prime_array(d / 2.0 - 1.0, t)


def f_profile(d, t):
    "F(t) for an array t > 0."
    t = np.asarray(t, dtype=float)
    return (1.0 - d / 2.0) * g_profile(d, t) / t - h_profile(d, t)


def w_profile(d, t):
    "W(t) for an array t > 0."
    t = np.asarray(t, dtype=float)
    if d == 3:
        return np.exp(-t) / (4.0 * math.pi)
    order = d / 2.0 - 1.0
    upper = np.maximum(t, 1.0) + _W_WINDOW
    half = 0.5 * (upper - t)
    total = np.zeros_like(t)
    for node, weight in zip(_W_NODES, _W_WEIGHTS):
        s = t + half * (1.0 + node)
        total += weight * s**order * bessel_k_array(order, s)
    return _norm(d) * half * total


def _check_radius(r):
    if not r > 0:
        raise DomainError(f"r must be > 0, was {r}.")


def _unscaled(ctx, t):
    "(G(t), H(t)) as KernelValues from the quadrature evaluators."
    factor = _norm(ctx.d) * t ** (1.0 - ctx.d / 2.0)
    k = bessel_k(ctx.order, t, ctx.rel_tol).scaled(factor)
    kp = bessel_k_prime(ctx.order, t, ctx.rel_tol).scaled(factor)
    return k, kp


def green_g(ctx, r):
    "G_a(r) > 0."
    _check_radius(r)
    g, _ = _unscaled(ctx, ctx.a * r)
    return g.scaled(ctx.a ** (ctx.d - 2))


def green_h(ctx, r):
    "H_a(r) < 0."
    _check_radius(r)
    _, h = _unscaled(ctx, ctx.a * r)
    return h.scaled(ctx.a ** (ctx.d - 2))


def kernel_f(ctx, r):
    "F_a(r) > 0."
    _check_radius(r)
    t = ctx.a * r
    g, h = _unscaled(ctx, t)
    f = g.scaled((1.0 - ctx.d / 2.0) / t) + h.scaled(-1.0)
    return f.scaled(ctx.a**ctx.d)


def _bessel_moment(t, order):
    return t**order * bessel_k_array(order, t)


def weight_w(ctx, r):
    """
    W_a(r) in (0, kappa), decreasing in a*r.

    The integral is truncated at max(a r, 1) + 40; the neglected tail
    is bounded by twice the integrand at the cut and added to abs_err.
    """
    _check_radius(r)
    t = ctx.a * r
    upper = max(t, 1.0) + _W_WINDOW
    value, abserr = integrate.quad(
        _bessel_moment, t, upper, args=(ctx.order,), epsabs=0.0, epsrel=ctx.rel_tol / 10, limit=200
    )
    tail = 2.0 * float(_bessel_moment(upper, ctx.order))
    c = _norm(ctx.d)
    return KernelValue(c * value, c * (abserr + tail))


def kappa(d, rel_tol=1e-10):
    """
    lim_{a->0} W_a, computed twice: from the Bessel moment integral and
    from the cosh representation.  The two must agree within rel_tol
    plus their quadrature errors, and both must be finite.
    """
    if d < 3:
        raise DomainError(f"kappa needs d >= 3, was {d}.")
    order = d / 2.0 - 1.0
    direct, direct_err = integrate.quad(
        _bessel_moment, 0.0, np.inf, args=(order,), epsabs=0.0, epsrel=rel_tol / 10, limit=200
    )
    direct *= _norm(d)
    direct_err *= _norm(d)

    def log_cosh(x):
        return np.logaddexp(x, -x) - math.log(2.0)

    def cosh_ratio(t):
        return math.exp(log_cosh(order * t) - (d / 2.0) * log_cosh(t))

    via_cosh, cosh_err = integrate.quad(
        cosh_ratio, 0.0, np.inf, epsabs=0.0, epsrel=rel_tol / 10, limit=200
    )
    factor = 2.0 ** (1.0 - d / 2.0) / sphere_area(d)
    via_cosh *= factor
    cosh_err *= factor

    if not (math.isfinite(direct) and math.isfinite(via_cosh)):
        raise AccuracyError(
            f"kappa({d}) is not finite: {direct} and {via_cosh}.",
            best_estimate=direct,
            abs_err=math.inf,
        )
    gap = abs(direct - via_cosh)
    if gap > rel_tol * abs(direct) + direct_err + cosh_err:
        raise AccuracyError(
            f"kappa({d}) representations disagree by {gap:.3g}.",
            best_estimate=direct,
            abs_err=gap,
        )
    return KernelValue(direct, direct_err + cosh_err + gap)


def kappa_tilde(d, rel_tol=1e-10):
    """
    int over S^(d-1) of |x - e|^(3-d), reduced to the polar angle
    from e.  Rotation invariance makes the choice of e irrelevant.
    """
    if d < 3:
        raise DomainError(f"kappa_tilde needs d >= 3, was {d}.")

    def polar(theta):
        return (2.0 * math.sin(theta / 2.0)) ** (3 - d) * math.sin(theta) ** (d - 2)

    value, abserr = integrate.quad(polar, 0.0, math.pi, epsabs=0.0, epsrel=rel_tol / 10)
    ring = sphere_area(d - 1)
    return KernelValue(ring * value, ring * abserr)


def kappa_tilde_mc(d, direction, n_samples=200000, seed=0):
    """
    Monte Carlo estimate of kappa_tilde for a given unit vector e.

    Returns (estimate, standard error).
    """
    e = np.asarray(direction, dtype=float)
    if e.shape != (d,):
        raise DomainError(f"direction must have {d} components, had {e.shape}.")
    e = e / np.linalg.norm(e)
    rng = np.random.Generator(np.random.Philox(seed))
    x = rng.standard_normal((n_samples, d))
    x /= np.linalg.norm(x, axis=1)[:, None]
    values = np.linalg.norm(x - e, axis=1) ** (3 - d) * sphere_area(d)
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(n_samples))


def green_potential(ctx, r):
    """
    Radial phi with -Laplace phi = F_a(r)/r, decaying at infinity, for
    d = 3 only:  phi = a/(4 pi) [ (1 - exp(-a r))/r + a E1(a r) ].

    Used to turn the solid F-term into a boundary double integral.
    """
    if ctx.d != 3:
        raise DomainError(f"green_potential is only available for d = 3, was {ctx.d}.")
    r = np.asarray(r, dtype=float)
    t = ctx.a * r
    return ctx.a / (4.0 * math.pi) * (-np.expm1(-t) / r + ctx.a * special.exp1(t))
