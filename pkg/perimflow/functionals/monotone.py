"""
The monotone functional Phi(Omega, a) and the inequalities around it.

    Phi = int int W_a |nu(x) - nu(y)|^2 / |x - y|^2 dsigma dsigma + 4 S_F

    dPhi/da = - int int G_a |nu - nu|^2 - 4 [a^2 Lambda - 2 S_F / a]

The second bracket is int int d/da (a^2 d/da (G_a/rho^2)) over
Omega x Omega^c, expanded with d/da (d/da (G_a/rho^2)) = G_a and
-a^2 d/da (G_a/rho^2) = F_a/rho.

Every function taking a sampler accepts None, which selects the
deterministic boundary form of the solid term.
"""

import math

from perimflow.errors import DomainError
from perimflow.functionals.model import FunctionalValue, InequalityReport, combine, exact, refined
from perimflow.functionals.oracles import sphere_power_integral
from perimflow.functionals.perimeter import (
    boundary_values,
    potential_derivative_mc,
    solid_f_term,
    solid_f_term_boundary,
)
from perimflow.functionals.seminorms import abs_seminorm, gagliardo_seminorm_sq, solid_angle_total
from perimflow.kernels.green import kappa, kappa_tilde

_SPHERE_AREA = 4.0 * math.pi


def _solid(surface, sampler, ctx):
    if sampler is None:
        return solid_f_term_boundary(surface, ctx)
    return solid_f_term(sampler, ctx)


def phi_terms(surface, sampler, ctx):
    "(boundary W-term, solid term 4 S_F) of Phi."
    return boundary_values(surface, ctx)["w_term"], _solid(surface, sampler, ctx)


def phi(surface, sampler, ctx):
    "Phi(Omega, a)."
    w_term, solid = phi_terms(surface, sampler, ctx)
    return combine("phi", [w_term, solid])


def phi_derivative(surface, sampler, ctx):
    "dPhi/da in closed form; zero on balls, negative otherwise."
    values = boundary_values(surface, ctx)
    s_f4 = _solid(surface, sampler, ctx)
    a = ctx.a
    # -g_term - 4 a^2 Lambda + 4 (d - 1) S_F / a, with s_f4 = 4 S_F
    return combine(
        "phi_derivative",
        [values["g_term"], values["perimeter"], s_f4],
        [-1.0, -4.0, (ctx.d - 1) / a],
    )


def phi_derivative_fd(surface, sampler, ctx, rel_step=0.05):
    """
    Central difference of Phi in a; with a sampler both evaluations
    share its random numbers.
    """
    h = rel_step * ctx.a
    upper = phi(surface, sampler, ctx.with_a(ctx.a + h))
    lower = phi(surface, sampler, ctx.with_a(ctx.a - h))
    return combine("phi_fd", [upper, lower], [1.0 / (2 * h), -1.0 / (2 * h)])


def check_derivative_inequality(surface, sampler, ctx):
    """
    0 <= 4 int int d/da (a^2 d/da (G_a/rho^2)) + int int G_a |nu - nu|^2,
    which is -dPhi/da.
    """
    deriv = phi_derivative(surface, sampler, ctx)
    lhs = FunctionalValue(-deriv.value, deriv.err, deriv.n_terms, "-phi_derivative")
    return InequalityReport("derivative-sign", lhs, exact(0.0, "zero"))


def check_isoperimetric_seminorm(surface):
    "[nu]^2_0 >= |dOmega| kappa~(3); equality exactly on spheres."
    lhs = gagliardo_seminorm_sq(surface, 0.0)
    area = _area(surface)
    k_tilde = kappa_tilde(3).value
    rhs = FunctionalValue(
        area.value * k_tilde, area.err * k_tilde, area.n_terms, "area*kappa_tilde"
    )
    return InequalityReport("isoperimetric", lhs, rhs)


def check_l1_seminorm(surface):
    "int int |nu - nu| / rho^2 >= |dOmega| |S^2|."
    lhs = abs_seminorm(surface)
    area = _area(surface)
    rhs = FunctionalValue(
        area.value * _SPHERE_AREA, area.err * _SPHERE_AREA, area.n_terms, "area*|S^2|"
    )
    return InequalityReport("l1-seminorm", lhs, rhs)


def check_power_conjecture(surface, r):
    """
    [nu]^2_r >= |dOmega|^(1-r) |S^2|^r int_{S^2} |x - e|^(-2r).

    Conjectured; the report is exploratory.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must be in (0, 1), was {r}.")
    lhs = gagliardo_seminorm_sq(surface, r)
    area = _area(surface)
    factor = _SPHERE_AREA**r * sphere_power_integral(r)
    value = area.value ** (1.0 - r) * factor
    err = (1.0 - r) * area.value ** (-r) * area.err * factor
    rhs = FunctionalValue(value, err, area.n_terms, f"power_rhs(r={r})")
    return InequalityReport("power-conjecture", lhs, rhs, exploratory=True)


def check_projected_normal_identity(surface, sampler, ctx):
    """
    int int G_a (nu_x . e)(nu_y . e) - [a^2 Lambda + 2a int int d/da (G_a/rho^2)]

    The solid integral is shot with the closed-form derivative kernel,
    or taken from the boundary form -S_F/a^2 when sampler is None.
    Returns the residual; zero up to its err.
    """
    values = boundary_values(surface, ctx)
    a = ctx.a
    if sampler is None:
        s_f = values["solid_f"]
        solid = FunctionalValue(-s_f.value / a**2, s_f.err / a**2, s_f.n_terms, "dG_solid")
    else:
        solid = potential_derivative_mc(sampler, ctx)
    return combine(
        "projected_normal_residual",
        [values["projected"], values["perimeter"], solid],
        [1.0, -1.0, -(ctx.d - 1) * a],
    )


def check_solid_angle(surface):
    "Area-weighted solid angle seen from the surface, against 2 pi |dOmega|."
    lhs = solid_angle_total(surface)
    area = _area(surface)
    rhs = FunctionalValue(
        2.0 * math.pi * area.value, 2.0 * math.pi * area.err, area.n_terms, "2pi*area"
    )
    return InequalityReport("solid-angle", lhs, rhs)


def limit_small_a(surface, sampler, ctx):
    "Phi at small a against kappa [nu]^2_0."
    k = kappa(3).value
    seminorm = gagliardo_seminorm_sq(surface, 0.0)
    target = FunctionalValue(k * seminorm.value, k * seminorm.err, seminorm.n_terms, "kappa*[nu]^2")
    return InequalityReport("small-a-limit", phi(surface, sampler, ctx), target)


def limit_large_a(surface):
    "kappa kappa~ |dOmega|, the large-a limit of Phi."
    area = _area(surface)
    c = kappa(3).value * kappa_tilde(3).value
    return FunctionalValue(c * area.value, c * area.err, area.n_terms, "kappa*kappa_tilde*area")


def _area(surface):
    coarse = surface.coarsened()
    return refined(surface.area, coarse.area, surface.size, "area")
