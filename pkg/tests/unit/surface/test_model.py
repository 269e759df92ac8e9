"""
Quadrature surface tests.
"""

import math

import numpy as np
import pytest

from perimflow.errors import ConfigurationError
from perimflow.surface.model import (
    build_surface,
    lat_long_grid,
    make_ellipsoid,
    make_perturbed_sphere,
    make_sphere,
)
from perimflow.surface.shapes import Ellipsoid


def test_lat_long_grid():
    "N Gauss-Legendre latitudes times 2N longitudes."
    theta, phi, gl_w, dtheta, dphi = lat_long_grid(8)
    assert theta.shape == phi.shape == gl_w.shape == dtheta.shape == (128,)
    assert dphi == pytest.approx(math.pi / 8)
    assert math.fsum(gl_w) * dphi == pytest.approx(4 * math.pi), "unit sphere area"
    assert np.all((theta > 0) & (theta < math.pi))


def test_sphere_node_count_and_area():
    "2 N^2 nodes; weights sum to 4 pi R^2."
    s = make_sphere(2.0, 32)
    assert s.size == 2048
    assert s.resolution == 32
    assert s.area == pytest.approx(16 * math.pi, rel=1e-12)
    assert s.volume == pytest.approx(32 * math.pi / 3, rel=1e-12)
    assert np.allclose(np.linalg.norm(s.nodes, axis=1), 2.0)
    assert np.allclose(s.normals, s.nodes / 2.0)


def test_ellipsoid_area_and_volume(ellipsoid48):
    "Spectral accuracy on a smooth surface."
    assert ellipsoid48.area == pytest.approx(ellipsoid48.exact_area(), rel=1e-8)
    assert ellipsoid48.volume == pytest.approx(8 * math.pi / 3, rel=1e-8)


def test_closed_surface_normals_sum_to_zero(ellipsoid48):
    "int nu dsigma = 0 on a closed surface."
    assert ellipsoid48.gauss_residual < 1e-10


def test_perturbed_sphere():
    "A perturbation beats the equal-volume sphere on area; normals stay unit length."
    s = make_perturbed_sphere(0.2, 2, 32)
    assert s.area > (36 * math.pi * s.volume**2) ** (1 / 3), "isoperimetric"
    assert s.area == pytest.approx(make_perturbed_sphere(0.2, 2, 64).area, rel=1e-7)
    assert np.allclose(np.linalg.norm(s.normals, axis=1), 1.0)
    assert s.gauss_residual < 1e-6


@pytest.mark.parametrize("resolution", [4, 7, 8.5])
def test_bad_resolution_throws(resolution):
    "Resolution must be an integer of at least 8."
    with pytest.raises(ConfigurationError, match="resolution must be an integer >= 8"):
        make_sphere(1.0, resolution)


def test_coarser_resolutions_allowed_when_asked():
    "Coarsened copies may go down to 4."
    s = build_surface(Ellipsoid(2, 1, 1), 4, minimum=4)
    assert s.size == 32


def test_ellipsoid_needs_three_axes():
    "Semiaxes triple."
    with pytest.raises(ConfigurationError, match="three semiaxes"):
        make_ellipsoid((2.0, 1.0), 16)


def test_coarsened_is_built_once():
    "Half resolution, same shape, same object every time."
    s = make_sphere(1.0, 16)
    coarse = s.coarsened()
    assert coarse.resolution == 8
    assert coarse.shape is s.shape
    assert s.coarsened() is coarse
    assert make_sphere(1.0, 8).coarsened().resolution == 4


def test_lipschitz_estimate():
    "|nu_i - nu_j| / |x_i - x_j| = 1/R on a sphere."
    assert make_sphere(1.0, 16).lipschitz_estimate == pytest.approx(1.0, rel=1e-9)
    assert make_sphere(2.0, 16).lipschitz_estimate == pytest.approx(0.5, rel=1e-9)


def test_lattice_edges():
    "One pair of physical cell edges per node, tangent to the surface."
    s = make_sphere(1.0, 16)
    edges = s.lattice_edges
    assert edges.shape == (s.size, 2, 3)
    normal_part = np.einsum("ikj,ij->ik", edges, s.normals)
    assert np.allclose(normal_part, 0.0, atol=1e-9)
    ring = np.hypot(s.nodes[:, 0], s.nodes[:, 1])
    assert np.allclose(np.linalg.norm(edges[:, 1, :], axis=1), ring * math.pi / 16)


def test_surface_delegates_to_shape():
    "exact_area, inside and circumradius come from the shape."
    s = make_ellipsoid((2.0, 1.0, 1.0), 8)
    assert s.exact_area() == pytest.approx(21.4784, rel=1e-5)
    assert s.circumradius() == 2.0
    assert s.inside([0.0, 0.0, 0.0]).tolist() == [True]
    assert s.shape_descriptor["shape"] == "ellipsoid"
    assert "N=8" in repr(s)


@pytest.mark.parametrize("surface_name", ["sphere48", "ellipsoid48"])
def test_nodes_shifted_along_normal(request, surface_name):
    "1e-6 inward along nu is inside, 1e-6 outward is not."
    s = request.getfixturevalue(surface_name)
    assert s.inside(s.nodes - 1e-6 * s.normals).all(), "inward"
    assert not s.inside(s.nodes + 1e-6 * s.normals).any(), "outward"


def test_perturbed_nodes_shifted_along_normal():
    "Same on the perturbed sphere, whose normal is not radial."
    s = make_perturbed_sphere(0.2, 3, 24)
    assert s.inside(s.nodes - 1e-6 * s.normals).all(), "inward"
    assert not s.inside(s.nodes + 1e-6 * s.normals).any(), "outward"


def test_area_refinement_converges():
    "The ellipsoid area error falls as N doubles."
    shape = Ellipsoid(2, 1, 1)
    exact = shape.exact_area()
    errors = [abs(build_surface(shape, n).area - exact) for n in (8, 16, 32)]
    assert errors[1] < errors[0], errors
    assert errors[2] <= max(errors[1], 1e-13 * exact), errors


def test_lipschitz_estimate_stable_under_refinement():
    "Within 20% between successive resolutions, near the largest curvature 2."
    estimates = [make_ellipsoid((2.0, 1.0, 1.0), n).lipschitz_estimate for n in (16, 32)]
    assert estimates[1] == pytest.approx(estimates[0], rel=0.2), estimates
    assert all(1.6 < e < 2.2 for e in estimates), estimates
