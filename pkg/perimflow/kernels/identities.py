"""
Residuals of the identities the kernels satisfy.

Each function returns a relative residual (a non-negative float) so
tests and the CLI "kernel-derivatives" / "weight-identities" checks
can compare against a single threshold.  a-derivatives are central
differences with step 1e-4 * a and one Richardson level.
"""

import numpy as np
from scipy import integrate

from perimflow.kernels.bessel import (
    bessel_k_array,
    bessel_k_prime_array,
    bessel_k_second_array,
)
from perimflow.kernels.green import (
    KernelContext,
    f_profile,
    green_g,
    green_h,
    kernel_f,
    sphere_area,
    weight_w,
)

FD_STEP = 1e-4


def richardson_derivative(func, a, rel_step=FD_STEP):
    "d func/da at a, central differences at h and h/2 combined."
    h = rel_step * a

    def central(step):
        return (func(a + step) - func(a - step)) / (2.0 * step)

    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def _rel(lhs, rhs):
    return float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300)))


def ode_residual(order, t):
    """
    max over t of |t^2 K'' + t K' - (t^2 + order^2) K| / (t^2 K).
    """
    t = np.asarray(t, dtype=float)
    k = bessel_k_array(order, t)
    kp = bessel_k_prime_array(order, t)
    kpp = bessel_k_second_array(order, t)
    residual = t**2 * kpp + t * kp - (t**2 + order**2) * k
    return float(np.max(np.abs(residual) / (t**2 * k)))


def decay_envelope(order, t):
    "K(t) t^(1/2) e^t and |K'(t)| t^(1/2) e^t, both bounded for large t."
    t = np.asarray(t, dtype=float)
    scale = np.sqrt(t) * np.exp(t)
    return bessel_k_array(order, t) * scale, np.abs(bessel_k_prime_array(order, t)) * scale


def potential_derivative(ctx, r):
    "Closed form of d/da (G_a(r)/r^2): H_a/r + (d/2 - 1) G_a/(a r^2)."
    return ctx.h_array(r) / r + (ctx.d / 2.0 - 1.0) * ctx.g_array(r) / (ctx.a * r**2)


def potential_derivative_residual(ctx, r):
    "FD a-derivative of G_a(r)/r^2 against its closed form."
    fd = richardson_derivative(lambda a: ctx.with_a(a).g_array(r) / r**2, ctx.a)
    closed = green_h(ctx, r).value / r + (ctx.d / 2.0 - 1.0) * green_g(ctx, r).value / (
        ctx.a * r**2
    )
    return _rel(fd, closed)


def second_derivative_residual(ctx, r):
    "d/da (a^(3-d) d/da (G_a/r^2)) against a^(3-d) G_a."
    d = ctx.d
    fd = richardson_derivative(
        lambda a: a ** (3 - d) * potential_derivative(ctx.with_a(a), r), ctx.a
    )
    closed = ctx.a ** (3 - d) * green_g(ctx, r).value
    return _rel(fd, closed)


def monotone_factor(ctx, r):
    "a^(3-d) d/da (G_a/r^2); negative for every a and r."
    return ctx.a ** (3 - ctx.d) * potential_derivative(ctx, r)


def f_identity_residual(ctx, r):
    "-a^2 d/da (G_a/r^2) against F_a/r."
    fd = -(ctx.a**2) * richardson_derivative(
        lambda a: ctx.with_a(a).g_array(r) / r**2, ctx.a
    )
    return _rel(fd, kernel_f(ctx, r).value / r)


def tail_integral_residual(ctx, r):
    """
    int_a^inf G_s(r) ds against W_a(r)/r^(d-1).  The s integral stops
    where s r exceeds max(a r, 1) + 40; past that G is below e^-40 of
    its value at the start.
    """
    upper = (max(ctx.a * r, 1.0) + 40.0) / r
    value, _ = integrate.quad(
        lambda s: float(ctx.with_a(s).g_array(r)),
        ctx.a,
        upper,
        epsabs=0.0,
        epsrel=1e-11,
        limit=400,
    )
    return _rel(value, weight_w(ctx, r).value / r ** (ctx.d - 1))


def _radial(func, d):
    value, _ = integrate.quad(
        lambda rho: float(func(rho)) * rho ** (d - 1),
        0.0,
        np.inf,
        epsabs=0.0,
        epsrel=1e-11,
        limit=400,
    )
    return sphere_area(d) * value


def normalization(ctx):
    "a^2 times the integral of G_a over R^d; equals 1."
    return _radial(lambda rho: ctx.a**2 * ctx.g_array(rho), ctx.d)


def f_mass(ctx):
    "Integral of F_a over R^d; the same for every a."
    return _radial(ctx.f_array, ctx.d)


def f_inverse_moment(d):
    "Integral of F(y)/|y| over R^d."
    return _radial(lambda rho: f_profile(d, rho) / rho, d)


def f_mass_drift(d, a_values):
    "Largest relative deviation of the F_a mass from its mean over a_values."
    masses = np.array([f_mass(KernelContext(d, a)) for a in a_values])
    return float(np.max(np.abs(masses - masses.mean())) / masses.mean())
