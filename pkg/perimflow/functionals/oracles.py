"""
Closed forms on spheres of radius R in R^3.

For x on the sphere, the chord length u = |x - y| has surface measure
2 pi u du on [0, 2R] whatever R is, and |nu(x) - nu(y)| = u/R.  Every
boundary integral below reduces to a one-dimensional integral in u.
"""

import math


def _exp_moment(k, a, length):
    "int_0^length u^k exp(-a u) du for k in {0, 1, 2}."
    e = math.exp(-a * length)
    t = a * length
    if k == 0:
        return -math.expm1(-t) / a
    if k == 1:
        return (1.0 - e * (1.0 + t)) / a**2
    if k == 2:
        return (2.0 - e * (t * t + 2.0 * t + 2.0)) / a**3
    raise ValueError(f"k must be 0, 1 or 2, was {k}.")


def sphere_power_integral(rho):
    "int over S^2 of |x - e|^(-2 rho) = 2^(2 - 2 rho) pi / (1 - rho), rho < 1."
    if not rho < 1.0:
        raise ValueError(f"rho must be < 1, was {rho}.")
    return 2.0 ** (2.0 - 2.0 * rho) * math.pi / (1.0 - rho)


def ball_area(R=1.0):
    "4 pi R^2."
    return 4.0 * math.pi * R**2


def ball_volume(R=1.0):
    "4 pi R^3 / 3."
    return 4.0 * math.pi * R**3 / 3.0


def ball_gagliardo(r, R=1.0):
    "[nu]^2_r on the sphere of radius R: 4 pi^2 (2R)^(2 - 2r) / (1 - r)."
    return 4.0 * math.pi**2 * (2.0 * R) ** (2.0 - 2.0 * r) / (1.0 - r)


def ball_abs_seminorm(R=1.0):
    "int int |nu - nu| / rho^2 = (4 pi R)^2."
    return (4.0 * math.pi * R) ** 2


def ball_fundamental_form(s, R=1.0):
    "c^2_s at every point of the sphere: pi (2R)^(1 - s) / ((1 - s) R^2)."
    return math.pi * (2.0 * R) ** (1.0 - s) / ((1.0 - s) * R**2)


def ball_w_term(a, R=1.0):
    "int int W_a |nu - nu|^2 / rho^2 = 2 pi (1 - e^(-2aR)(1 + 2aR)) / a^2."
    return 2.0 * math.pi * _exp_moment(1, a, 2.0 * R)


def ball_g_term(a, R=1.0):
    "int int G_a |nu - nu|^2."
    return 2.0 * math.pi * _exp_moment(2, a, 2.0 * R)


def ball_perimeter(a, R=1.0):
    "a^2 Lambda = 2 pi R^2 int_0^2R e^(-au) (1 - u^2/(2R^2)) du."
    length = 2.0 * R
    return 2.0 * math.pi * R**2 * (
        _exp_moment(0, a, length) - _exp_moment(2, a, length) / (2.0 * R**2)
    )


def ball_projected(a, R=1.0):
    "int int G_a (nu_x . e)(nu_y . e) = -(pi/2) int_0^2R u^2 e^(-au) du."
    return -0.5 * math.pi * _exp_moment(2, a, 2.0 * R)


def ball_phi(R=1.0):
    "Phi on the ball for every a: kappa kappa~ |dB| = 4 pi R^2."
    return ball_area(R)


def ball_solid_f(a, R=1.0):
    "S_F on the ball, from Phi = w_term + 4 S_F."
    return (ball_phi(R) - ball_w_term(a, R)) / 4.0
