"""
Bessel-potential nonlocal perimeter and the solid F-term, d = 3.

    Lambda(Omega, a) = int_{Omega^c} int_Omega G_a(x - y) dx dy
    S_F(Omega, a)    = int_{Omega^c} int_Omega F_a(x - y)/|x - y| dx dy

Both have a deterministic boundary form:

    a^2 Lambda = int int G_a(x - y) nu(x) . nu(y)
    S_F        = a m_F |Omega| - int int phi(x - y) nu(x) . nu(y)

with m_F = int F/|y| and phi the radial potential of F_a/rho.  The
Monte Carlo forms work from a VolumeSampler instead and serve as
independent estimates.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from perimflow.errors import ConfigurationError, RegimeError
from perimflow.functionals.model import FunctionalValue, refined
from perimflow.kernels.green import green_potential
from perimflow.kernels.identities import f_inverse_moment
from perimflow.kernels.radial import (
    perimeter_kernel,
    potential_derivative_kernel,
    solid_f_kernel,
)
from perimflow.quadrature.pairs import PairKernel, SingularTerm, double_sums, local_coefficients
from perimflow.surface.sampler import truncation_bound

logger = logging.getLogger(__name__)

# Largest a per unit of resolution on the lat-long grid.
REGIME_RATIO = 1.0 / 20.0

_EULER_GAMMA = 0.5772156649015329


def a_max(resolution):
    "Largest a the boundary sums resolve at this resolution."
    return REGIME_RATIO * resolution


def check_regime(surface, ctx):
    "Raise RegimeError if a is too large for the surface's node spacing."
    if ctx.d != 3:
        raise ConfigurationError(f"surface functionals need d = 3, was {ctx.d}.")
    limit = a_max(surface.resolution)
    if ctx.a > limit:
        raise RegimeError(
            f"a = {ctx.a} exceeds a_max = {limit:g} for resolution {surface.resolution}."
        )


@lru_cache(maxsize=4)
def inverse_moment(d):
    "m_F = int F(y)/|y| dy, cached."
    return f_inverse_moment(d)


@dataclass(frozen=True)
class BoundaryTerms:
    """
    One a, one surface, every boundary double integral Phi needs:

      w_term     int int W_a |nu - nu|^2 / rho^2
      g_term     int int G_a |nu - nu|^2
      perimeter  int int G_a nu . nu              (= a^2 Lambda)
      projected  int int G_a (nu_x . e)(nu_y . e), e = (x - y)/rho
      potential  int int phi nu . nu
    """

    w_term: float
    g_term: float
    perimeter: float
    projected: float
    potential: float
    volume: float
    n_pairs: int


def _boundary_kernels(surface, ctx):
    a = ctx.a
    kappa3 = 1.0 / (4.0 * math.pi)
    c_sq = local_coefficients(surface).sq

    def w_term(block):
        return ctx.w_array(block.rho) * block.dnu_sq / block.rho_sq

    def g_values(block):
        return block.memo("g", lambda: ctx.g_array(block.rho))

    def g_term(block):
        return g_values(block) * block.dnu_sq

    def perimeter(block):
        return g_values(block) * block.dot

    def projected(block):
        return g_values(block) * block.proj_row * block.proj_col

    def potential(block):
        return green_potential(ctx, block.rho) * block.dot

    log_a = math.log(a)
    return [
        PairKernel("w_term", w_term, (SingularTerm(kappa3 * c_sq, 0.0),)),
        PairKernel("g_term", g_term),
        PairKernel(
            "perimeter",
            perimeter,
            (SingularTerm(kappa3, 1.0), SingularTerm(-a * kappa3, 0.0)),
        ),
        PairKernel("projected", projected),
        PairKernel(
            "potential",
            potential,
            (
                SingularTerm(a**2 * kappa3 * (1.0 - _EULER_GAMMA - log_a), 0.0),
                SingularTerm(-(a**2) * kappa3, log=True),
            ),
        ),
    ]


@lru_cache(maxsize=64)
def boundary_terms(surface, ctx):
    "BoundaryTerms for (surface, ctx); cached, both are immutable."
    sums = double_sums(surface, _boundary_kernels(surface, ctx))
    logger.debug("boundary terms at a=%g, N=%d: %s", ctx.a, surface.resolution, sums)
    return BoundaryTerms(
        w_term=sums["w_term"],
        g_term=sums["g_term"],
        perimeter=sums["perimeter"],
        projected=sums["projected"],
        potential=sums["potential"],
        volume=surface.volume,
        n_pairs=surface.size * (surface.size - 1),
    )


def _solid_f_from_terms(terms, ctx):
    return ctx.a * inverse_moment(ctx.d) * terms.volume - terms.potential


def boundary_values(surface, ctx):
    """
    Dict of FunctionalValues built from the boundary terms at N and N/2:
    w_term, g_term, perimeter (a^2 Lambda), projected, solid_f (S_F).
    """
    check_regime(surface, ctx)
    fine = boundary_terms(surface, ctx)
    coarse = boundary_terms(surface.coarsened(), ctx)
    n = fine.n_pairs
    out = {
        name: refined(getattr(fine, name), getattr(coarse, name), n, name)
        for name in ("w_term", "g_term", "perimeter", "projected")
    }
    out["solid_f"] = refined(
        _solid_f_from_terms(fine, ctx), _solid_f_from_terms(coarse, ctx), n, "solid_f"
    )
    return out


def nonlocal_perimeter_boundary(surface, ctx):
    "Lambda(Omega, a) from the boundary form, a^-2 int int G_a nu . nu."
    a2_lambda = boundary_values(surface, ctx)["perimeter"]
    scale = ctx.a**-2
    return FunctionalValue(
        a2_lambda.value * scale, a2_lambda.err * scale, a2_lambda.n_terms, "lambda_boundary"
    )


def _shoot(sampler, kernel, a):
    "End points of one shot per inside point, radii from the kernel's law."
    radii = kernel.sample_radii(sampler.uniforms, a)
    return sampler.inside_points + radii[:, None] * sampler.directions


def _mean_estimate(values, tag, **extras):
    n = len(values)
    return FunctionalValue(
        float(np.mean(values)), float(np.std(values, ddof=1) / math.sqrt(n)), n, tag, extras
    )


def nonlocal_perimeter_mc(sampler, ctx):
    """
    Lambda(Omega, a) by Monte Carlo.

    Inside point i pairs with shell point i, giving |Omega| |shell|
    G_a(x_i - y_i) for the part in B_R; the part past B_R is a shot
    from x_i with the a^2 G_a radial law, worth |Omega| / a^2 when it
    lands outside B_R.  Volumes come from the surface quadrature.

    Nothing past B_R is dropped, so err is the standard error alone.
    extras["tail_bound"] is what truncating at R would have cost; it
    does not enter err.
    """
    volume = sampler.quadrature_volume
    shell = sampler.quadrature_shell_volume
    n = min(len(sampler.inside_points), len(sampler.outside_points))
    x = sampler.inside_points[:n]
    y = sampler.outside_points[:n]
    near = volume * shell * ctx.g_array(np.linalg.norm(x - y, axis=1))

    ends = _shoot(sampler, perimeter_kernel(ctx.d), ctx.a)[:n]
    beyond = np.linalg.norm(ends, axis=1) > sampler.trunc_radius
    far = beyond * (volume / ctx.a**2)

    bound = truncation_bound(sampler.surface, ctx.a, sampler.trunc_radius)
    return _mean_estimate(near + far, "lambda_mc", tail_bound=bound)


def _shooting_fraction(sampler, kernel, a):
    ends = _shoot(sampler, kernel, a)
    return (~sampler.inside_test(ends)).astype(float)


def solid_f_term(sampler, ctx):
    """
    4 S_F by shooting: from each inside point, one ray with radius drawn
    from the F_a/rho law; S_F = m_F a |Omega| P(ray ends outside).
    """
    kernel = solid_f_kernel(ctx.d)
    out = _shooting_fraction(sampler, kernel, ctx.a)
    scale = 4.0 * kernel.mass(ctx.a) * sampler.quadrature_volume
    return _mean_estimate(scale * out, "solid_f_mc")


def solid_f_term_boundary(surface, ctx):
    "4 S_F from the Gauss-Green boundary form."
    s_f = boundary_values(surface, ctx)["solid_f"]
    return FunctionalValue(4.0 * s_f.value, 4.0 * s_f.err, s_f.n_terms, "solid_f_boundary")


def potential_derivative_mc(sampler, ctx):
    """
    int_{Omega^c} int_Omega d/da (G_a/rho^2) by shooting with the
    closed-form derivative kernel; negative.
    """
    kernel = potential_derivative_kernel(ctx.d)
    out = _shooting_fraction(sampler, kernel, ctx.a)
    scale = kernel.mass(ctx.a) * sampler.quadrature_volume
    return _mean_estimate(scale * out, "potential_derivative_mc")


def small_a_solid_bound(surface, ctx):
    "|Omega| a m_F, an upper bound for S_F at any a."
    return surface.volume * ctx.a * inverse_moment(ctx.d)
