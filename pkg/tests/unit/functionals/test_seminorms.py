"""
Seminorm tests on the sphere, where everything is known in closed form.
"""

import math

import numpy as np
import pytest

from perimflow.errors import DomainError
from perimflow.functionals.oracles import (
    ball_abs_seminorm,
    ball_fundamental_form,
    ball_gagliardo,
)
from perimflow.functionals.seminorms import (
    abs_seminorm,
    frac_fundamental_form_sq,
    fundamental_form_total,
    gagliardo_seminorm_sq,
    solid_angle_total,
    solid_angles,
)
from perimflow.surface.model import make_sphere

from tests.utils import assert_close


def _equator(surface):
    return np.abs(surface.nodes[:, 2]) < 0.5 * surface.circumradius()


@pytest.mark.parametrize("r", [-0.1, 1.0, 1.5])
def test_gagliardo_r_out_of_range(r):
    "r in [0, 1)."
    with pytest.raises(DomainError, match=r"r must be in \[0, 1\)"):
        gagliardo_seminorm_sq(make_sphere(1.0, 8), r)


@pytest.mark.parametrize("s", [-1.0, 1.0])
def test_fundamental_form_s_out_of_range(s):
    "s in (-1, 1)."
    with pytest.raises(DomainError, match=r"s must be in \(-1, 1\)"):
        frac_fundamental_form_sq(make_sphere(1.0, 8), s)


def test_endpoint_seminorm_of_sphere(sphere96):
    "[nu]^2_0 = (4 pi)^2 on the unit sphere."
    value = gagliardo_seminorm_sq(sphere96, 0.0)
    assert_close(value.value, (4 * math.pi) ** 2, 0.01, "[nu]^2_0")
    assert value.err < 0.01 * value.value, "refinement error is small"
    assert value.n_terms == sphere96.size * (sphere96.size - 1)


def test_fractional_seminorm_of_sphere(sphere48):
    "r = 1/2."
    value = gagliardo_seminorm_sq(sphere48, 0.5)
    assert_close(value.value, ball_gagliardo(0.5), 0.01, "[nu]^2_1/2")


def test_abs_seminorm_of_sphere(sphere48):
    "int int |nu - nu| / rho^2 = (4 pi)^2."
    assert_close(abs_seminorm(sphere48).value, ball_abs_seminorm(), 0.01, "L1 seminorm")


def test_seminorm_scales_with_radius():
    "[nu]^2_r scales as R^(2 - 2r)."
    small = gagliardo_seminorm_sq(make_sphere(1.0, 24), 0.5).value
    large = gagliardo_seminorm_sq(make_sphere(3.0, 24), 0.5).value
    assert large / small == pytest.approx(3.0, rel=1e-6)


def test_fundamental_form_constant_on_sphere(sphere48):
    "c^2_s is the same at every point of a sphere; checked away from the poles."
    values = frac_fundamental_form_sq(sphere48, 0.0)
    assert len(values) == sphere48.size
    band = np.array([v.value for v in values])[_equator(sphere48)]
    expected = ball_fundamental_form(0.0)
    assert np.all(np.abs(band - expected) <= 0.02 * expected), f"{band.min()}..{band.max()}"
    assert all(v.err >= 0 for v in values)


def test_fundamental_form_total(sphere48):
    "2 int c^2_s = [nu]^2 at r = (s + 1)/2."
    total = fundamental_form_total(frac_fundamental_form_sq(sphere48, 0.0), sphere48)
    assert_close(total.value, ball_gagliardo(0.5), 0.02, "2 int c^2_0")


def test_solid_angles(sphere48):
    "2 pi at every node of a smooth closed surface."
    angles = solid_angles(sphere48)
    band = angles[_equator(sphere48)]
    assert np.all(np.abs(band - 2 * math.pi) <= 0.01 * 2 * math.pi)
    total = solid_angle_total(sphere48)
    assert_close(total.value, 2 * math.pi * 4 * math.pi, 0.01, "solid angle total")


def test_solid_angles_on_ellipsoid(ellipsoid48):
    "The total does not depend on the shape."
    total = solid_angle_total(ellipsoid48)
    assert_close(total.value, 2 * math.pi * ellipsoid48.area, 0.01, "ellipsoid solid angle")


@pytest.mark.parametrize("s", [-0.5, 0.0, 0.5])
def test_fundamental_form_links_to_seminorm_on_ellipsoid(ellipsoid48, s):
    "2 int c^2_s = [nu]^2 at r = (s + 1)/2 holds off the ball too."
    total = fundamental_form_total(frac_fundamental_form_sq(ellipsoid48, s), ellipsoid48)
    seminorm = gagliardo_seminorm_sq(ellipsoid48, (s + 1.0) / 2.0)
    assert_close(total.value, seminorm.value, 1e-3, f"s = {s}")


def test_seminorm_refinement_converges(sphere48, sphere96):
    "Doubling N shrinks the refinement error and the true error stays inside three of it."
    exact = (4 * math.pi) ** 2
    for compute in (lambda s: gagliardo_seminorm_sq(s, 0.0), abs_seminorm):
        coarse, fine = compute(sphere48), compute(sphere96)
        assert fine.err < coarse.err, f"{fine!r} vs {coarse!r}"
        assert abs(fine.value - exact) <= 3 * fine.err, f"{fine!r}"
