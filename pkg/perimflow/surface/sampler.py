"""
Seeded Monte Carlo point sets for the solid integrals.

A VolumeSampler holds uniform points in Omega and in the shell
B_R minus Omega, plus one shooting direction and one uniform per inside
point.  Those last two are reused for every a, so estimates at
different a share their random numbers.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from perimflow.errors import ConfigurationError
from perimflow.kernels.radial import perimeter_kernel, solid_f_kernel, tail_mass

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000

# auto_trunc_radius stops here; the region past B_R is covered by shooting.
_MAX_TRUNC_FACTOR = 4


@dataclass(frozen=True)
class Estimate:
    "Monte Carlo estimate with its standard error."

    value: float
    std_err: float


@dataclass(frozen=True, eq=False)
class VolumeSampler:  # pylint: disable=too-many-instance-attributes
    "Inside and shell samples for one surface.  Compares by identity."

    surface: object = field(repr=False)
    trunc_radius: float
    seed: int
    inside_points: np.ndarray = field(repr=False)
    outside_points: np.ndarray = field(repr=False)
    inside_volume: Estimate
    shell_volume: Estimate
    directions: np.ndarray = field(repr=False)
    uniforms: np.ndarray = field(repr=False)

    def inside_test(self, points):
        "Membership in Omega."
        return self.surface.inside(points)

    @property
    def ball_volume(self):
        "|B_R|."
        return 4.0 * math.pi * self.trunc_radius**3 / 3.0

    @property
    def quadrature_volume(self):
        "|Omega| from the surface quadrature."
        return self.surface.volume

    @property
    def quadrature_shell_volume(self):
        "|B_R| - |Omega| with |Omega| from the surface quadrature."
        return self.ball_volume - self.surface.volume


def _streams(seed, count):
    "Independent counter-based generators derived from one seed."
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _uniform_ball(rng, n, radius):
    direction = rng.standard_normal((n, 3))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    return direction * (radius * np.cbrt(rng.random(n)))[:, None]


def _rejection(rng, n, propose, keep):
    """
    Draw proposals in batches until n are kept.

    Returns (kept points, number of proposals used).
    """
    kept, trials, have = [], 0, 0
    batch = max(2 * n, 4096)
    while have < n:
        points = propose(rng, batch)
        mask = keep(points)
        accepted = points[mask]
        need = n - have
        if len(accepted) >= need:
            # Count proposals only up to the one that completed the set.
            last = np.flatnonzero(mask)[need - 1]
            trials += last + 1
            kept.append(accepted[:need])
            have = n
        else:
            trials += batch
            kept.append(accepted)
            have += len(accepted)
    return np.concatenate(kept), trials


def _fraction_estimate(region_volume, hits, trials):
    p = hits / trials
    return Estimate(region_volume * p, region_volume * math.sqrt(p * (1.0 - p) / trials))


def sample_volume(surface, trunc_radius, n_inside, n_outside, seed):
    """
    Rejection-sampled uniform points in Omega and in B_R minus Omega.

    trunc_radius must be at least twice the circumradius, so that
    Omega lies in B_{R/2}.
    """
    circ = surface.circumradius()
    if not trunc_radius >= 2.0 * circ:
        raise ConfigurationError(
            f"trunc_radius must be >= {2.0 * circ} (twice the circumradius), was {trunc_radius}."
        )
    for label, n in (("n_inside", n_inside), ("n_outside", n_outside)):
        if n < MIN_SAMPLES:
            raise ConfigurationError(f"{label} must be >= {MIN_SAMPLES}, was {n}.")

    box_rng, ball_rng, dir_rng, unif_rng = _streams(seed, 4)

    def in_box(rng, n):
        return rng.uniform(-circ, circ, size=(n, 3))

    inside_points, box_trials = _rejection(box_rng, n_inside, in_box, surface.inside)
    box_volume = (2.0 * circ) ** 3
    inside_volume = _fraction_estimate(box_volume, n_inside, box_trials)

    def in_ball(rng, n):
        return _uniform_ball(rng, n, trunc_radius)

    def outside(points):
        return ~surface.inside(points)

    outside_points, ball_trials = _rejection(ball_rng, n_outside, in_ball, outside)
    ball_volume = 4.0 * math.pi * trunc_radius**3 / 3.0
    shell_volume = _fraction_estimate(ball_volume, n_outside, ball_trials)

    directions = dir_rng.standard_normal((n_inside, 3))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    uniforms = unif_rng.random(n_inside)

    logger.debug(
        "sampled %d inside (%d trials), %d outside (%d trials), R=%g, seed=%d",
        n_inside,
        box_trials,
        n_outside,
        ball_trials,
        trunc_radius,
        seed,
    )
    return VolumeSampler(
        surface=surface,
        trunc_radius=float(trunc_radius),
        seed=seed,
        inside_points=inside_points,
        outside_points=outside_points,
        inside_volume=inside_volume,
        shell_volume=shell_volume,
        directions=directions,
        uniforms=uniforms,
    )


def truncation_bound(surface, a, trunc_radius):
    """
    Bound on what the solid integrals lose past B_R.

    With Omega inside B_{R/2}, every pair (x in Omega, |y| > R) is at
    least R/2 apart, so each term is at most |Omega| times the kernel
    mass outside B_{R/2}.
    """
    volume = surface.volume
    lam = tail_mass(perimeter_kernel(3), a, trunc_radius / 2.0) / a**2
    solid = tail_mass(solid_f_kernel(3), a, trunc_radius / 2.0)
    return volume * max(lam, solid)


def auto_trunc_radius(surface, a_min, tol=1e-6):
    """
    Start at twice the circumradius and double while the truncation
    bound at the smallest a exceeds tol (relative to |Omega|).
    """
    circ = surface.circumradius()
    radius = 2.0 * circ
    while radius < _MAX_TRUNC_FACTOR * circ:
        bound = truncation_bound(surface, a_min, radius)
        if bound <= tol * surface.volume:
            break
        logger.debug("truncation bound %.3g at R=%g, doubling", bound, radius)
        radius *= 2.0
    bound = truncation_bound(surface, a_min, radius)
    limit = tol * surface.volume
    if bound > limit:
        logger.warning(
            "truncation radius capped at R=%g; bound %.3g is above %.3g", radius, bound, limit
        )
    return radius
