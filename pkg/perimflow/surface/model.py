"""
Quadrature representation of a closed surface.

Nodes sit on a latitude-longitude grid: N Gauss-Legendre nodes in
cos(theta) times 2N equally spaced longitudes, so a surface at
resolution N has 2 N^2 nodes.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import legendre

from perimflow.errors import ConfigurationError
from perimflow.surface.shapes import AbstractShape, Ellipsoid, PerturbedSphere, Sphere

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 8

# Rows per block when scanning node pairs.
_PAIR_BLOCK = 256


@dataclass(frozen=True, eq=False)
class QuadratureSurface:  # pylint: disable=too-many-instance-attributes
    """
    Nodes, outward unit normals and area weights of a closed surface.

    Alongside the quadrature triple the surface keeps, per node, the
    parametric tangents X_theta and X_phi, the normal derivatives
    nu_theta and nu_phi, and the grid steps (dtheta, dphi).  The
    singular-sum corrections read the local node lattice from these.

    Instances compare by identity so they can key caches.
    """

    shape: AbstractShape
    resolution: int
    nodes: np.ndarray = field(repr=False)
    normals: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    tangents: np.ndarray = field(repr=False)
    normal_derivatives: np.ndarray = field(repr=False)
    steps: np.ndarray = field(repr=False)

    @property
    def size(self):
        "Number of nodes."
        return len(self.weights)

    @property
    def shape_descriptor(self):
        "{shape, params} of the analytic shape."
        return self.shape.descriptor()

    @cached_property
    def area(self):
        "Sum of the weights."
        return math.fsum(self.weights)

    @cached_property
    def volume(self):
        "Enclosed volume by the divergence theorem, (1/3) int x . nu."
        return math.fsum(self.weights * np.einsum("ij,ij->i", self.nodes, self.normals)) / 3.0

    @cached_property
    def gauss_residual(self):
        "|sum of w_i nu_i|, zero for a closed surface."
        total = [math.fsum(self.weights * self.normals[:, k]) for k in range(3)]
        return float(np.linalg.norm(total))

    @cached_property
    def lattice_edges(self):
        "Physical cell edges X_theta dtheta and X_phi dphi, shape (n, 2, 3)."
        return self.tangents * self.steps[:, :, None]

    @cached_property
    def lipschitz_estimate(self):
        "max over node pairs of |nu_i - nu_j| / |x_i - x_j|."
        best = 0.0
        x, nu = self.nodes, self.normals
        xsq = np.einsum("ij,ij->i", x, x)
        for start in range(0, self.size, _PAIR_BLOCK):
            stop = min(start + _PAIR_BLOCK, self.size)
            rho_sq = xsq[start:stop, None] + xsq[None, :] - 2.0 * x[start:stop] @ x.T
            dnu_sq = np.maximum(2.0 - 2.0 * nu[start:stop] @ nu.T, 0.0)
            rows = np.arange(start, stop)
            rho_sq[rows - start, rows] = np.inf
            ratio = dnu_sq / np.maximum(rho_sq, 1e-300)
            best = max(best, float(ratio.max()))
        return math.sqrt(best)

    def exact_area(self):
        "Closed-form area of the shape, or None."
        return self.shape.exact_area()

    def inside(self, points):
        "Boolean mask of points inside the shape."
        return self.shape.inside(np.atleast_2d(points))

    def circumradius(self):
        "Radius of a ball about the origin containing the surface."
        return self.shape.circumradius()

    @cached_property
    def _coarse(self):
        return build_surface(self.shape, max(self.resolution // 2, 4), minimum=4)

    def coarsened(self):
        "The same shape at half the resolution (at least 4), built once."
        return self._coarse

    def __repr__(self):
        return f"<QuadratureSurface ({self.shape!r}, N={self.resolution}, nodes={self.size})>"


def lat_long_grid(resolution):
    "theta, phi (flattened, theta-major), dtheta per node and dphi."
    x, w = legendre.leggauss(resolution)
    theta_1d = np.arccos(x)
    dphi = math.pi / resolution
    phi_1d = dphi * np.arange(2 * resolution)
    theta, phi = np.meshgrid(theta_1d, phi_1d, indexing="ij")
    gl_w = np.repeat(w, 2 * resolution)
    dtheta = gl_w / np.sin(theta.ravel())
    return theta.ravel(), phi.ravel(), gl_w, dtheta, dphi


def build_surface(shape, resolution, minimum=MIN_RESOLUTION):
    "Quadrature surface of an analytic shape."
    if int(resolution) != resolution or resolution < minimum:
        raise ConfigurationError(f"resolution must be an integer >= {minimum}, was {resolution}.")
    resolution = int(resolution)
    theta, phi, gl_w, dtheta, dphi = lat_long_grid(resolution)

    nodes = shape.position(theta, phi)
    normals = shape.normal(theta, phi)
    weights = gl_w * dphi * shape.area_density(theta, phi)
    x_t, x_p = shape.tangents(theta, phi)
    n_t, n_p = shape.normal_derivatives(theta, phi)
    steps = np.stack([dtheta, np.full_like(dtheta, dphi)], axis=1)

    logger.debug("built %r at N=%d, %d nodes", shape, resolution, len(weights))
    return QuadratureSurface(
        shape=shape,
        resolution=resolution,
        nodes=nodes,
        normals=normals,
        weights=weights,
        tangents=np.stack([x_t, x_p], axis=1),
        normal_derivatives=np.stack([n_t, n_p], axis=1),
        steps=steps,
    )


def make_sphere(radius, resolution):
    "Sphere of the given radius about the origin."
    return build_surface(Sphere(R=radius), resolution)


def make_ellipsoid(semiaxes, resolution):
    "Ellipsoid with semiaxes (a, b, c)."
    if len(semiaxes) != 3:
        raise ConfigurationError(f"ellipsoid needs three semiaxes, had {len(semiaxes)}.")
    a, b, c = semiaxes
    return build_surface(Ellipsoid(a, b, c), resolution)


def make_perturbed_sphere(epsilon, mode, resolution):
    "Unit sphere with the axisymmetric radial perturbation eps cos(m theta) sin^m(theta)."
    return build_surface(PerturbedSphere(eps=epsilon, mode=mode), resolution)
