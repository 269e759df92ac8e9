"""
Modified Bessel function of the second kind, K_order(t).

The scalar functions integrate

    K_order(t) = int_0^inf exp(-t cosh r) cosh(order r) dr

adaptively and report an error estimate; the array functions are
the fast path used inside double sums and lean on scipy.special.kv.
Half-integer order 1/2 has a closed form and is used directly.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from perimflow.errors import AccuracyError, DomainError

# Smallest argument accepted by the scalar evaluators.
T_MIN = 1.0e-8

# The integrand is below exp(-40) relative to its start beyond R_max.
_CUTOFF = 40.0

_HALF = 0.5
_SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


@dataclass(frozen=True)
class KernelValue:
    "Kernel value with an estimated absolute error."

    value: float
    abs_err: float

    def __post_init__(self):
        if not self.abs_err >= 0:
            raise ValueError(f"abs_err must be >= 0, was {self.abs_err}.")

    @property
    def rel_err(self):
        "abs_err relative to |value|."
        if self.value == 0:
            return math.inf
        return self.abs_err / abs(self.value)

    def __add__(self, other):
        return KernelValue(self.value + other.value, self.abs_err + other.abs_err)

    def scaled(self, factor):
        "Multiply value and error by a constant."
        return KernelValue(self.value * factor, self.abs_err * abs(factor))


def _check_args(order, t):
    "Raise DomainError/AccuracyError for unusable arguments."
    if order < 0:
        raise DomainError(f"order must be >= 0, was {order}.")
    if not t > 0:
        raise DomainError(f"t must be > 0, was {t}.")
    if t < T_MIN:
        raise AccuracyError(
            f"t = {t} is below the small-argument limit {T_MIN}.", best_estimate=None
        )


def _is_half(order):
    return abs(order - _HALF) < 1e-15


def _closed_form_half(t):
    return _SQRT_HALF_PI * math.exp(-t) / math.sqrt(t)


def _integrand(r, order, t):
    # exp(-t cosh r) cosh(order r), split to keep cosh(order r) finite.
    tc = t * math.cosh(r)
    return 0.5 * (math.exp(order * r - tc) + math.exp(-order * r - tc))


def bessel_k(order, t, rel_tol=1e-10):
    """
    K_order(t) by adaptive quadrature of its cosh integral.

    Raises DomainError for t <= 0 or negative order, AccuracyError
    (with the best estimate attached) if quad does not converge.
    """
    _check_args(order, t)
    if _is_half(order):
        v = _closed_form_half(t)
        return KernelValue(v, 4 * np.finfo(float).eps * v)

    r_max = math.acosh((t + _CUTOFF) / t)
    value, abserr = integrate.quad(
        _integrand, 0.0, r_max, args=(order, t), epsabs=0.0, epsrel=rel_tol / 10, limit=400
    )
    # Crude bound on the neglected tail.
    tail = math.exp(-(t + _CUTOFF)) * math.cosh(order * r_max)
    abserr = abserr + tail
    if not value > 0 or abserr > rel_tol * value:
        raise AccuracyError(
            f"K_{order}({t}) did not reach rel_tol {rel_tol} (err {abserr:.3g}).",
            best_estimate=value,
            abs_err=abserr,
        )
    return KernelValue(value, abserr)


def bessel_k_prime(order, t, rel_tol=1e-10):
    """
    dK_order/dt = -(K_{order+1} + K_{|order-1|}) / 2.
    """
    _check_args(order, t)
    upper = bessel_k(order + 1, t, rel_tol)
    lower = bessel_k(abs(order - 1), t, rel_tol)
    return (upper + lower).scaled(-0.5)


def bessel_k_array(order, t):
    "K_order on an array of positive arguments."
    t = np.asarray(t, dtype=float)
    if _is_half(order):
        return _SQRT_HALF_PI * np.exp(-t) / np.sqrt(t)
    return special.kv(order, t)


def bessel_k_prime_array(order, t):
    "K'_order on an array of positive arguments."
    t = np.asarray(t, dtype=float)
    if _is_half(order):
        return -_SQRT_HALF_PI * np.exp(-t) * (t**-0.5 + 0.5 * t**-1.5)
    return -0.5 * (special.kv(order + 1, t) + special.kv(abs(order - 1), t))


def bessel_k_second_array(order, t):
    """
    K''_order from differentiating the derivative recurrence once more:
    K'' = (K_{order+2} + 2 K_order + K_{|order-2|}) / 4.
    """
    t = np.asarray(t, dtype=float)
    return 0.25 * (
        special.kv(order + 2, t) + 2 * special.kv(order, t) + special.kv(abs(order - 2), t)
    )
