"""
Shape registry.

Analytic closed surfaces in R^3 given on (theta, phi) in
(0, pi) x [0, 2 pi).  Each shape supplies its parametrization, the
outward unit normal, the area density |X_theta x X_phi| / sin(theta)
and an inside test.
"""

import math
from abc import ABC, abstractmethod

import numpy as np
from scipy import special

from perimflow.errors import ConfigurationError

# Step for the finite-difference tangents and normal derivatives.
_FD_STEP = 1e-5


def _spherical_frame(theta, phi):
    "(e_r, e_theta, e_phi), each of shape theta.shape + (3,)."
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    e_r = np.stack([st * cp, st * sp, ct], axis=-1)
    e_theta = np.stack([ct * cp, ct * sp, -st], axis=-1)
    e_phi = np.stack([-sp, cp, np.zeros_like(phi)], axis=-1)
    return e_r, e_theta, e_phi


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


class AbstractShape(ABC):
    """
    Analytic shape, inherited from by all shapes.

    Subclasses validate their parameters in __init__ and raise
    ConfigurationError for unusable ones.
    """

    @classmethod
    @abstractmethod
    def name(cls):
        "Registry name, as used on the command line."

    @abstractmethod
    def params(self):
        "Dict of the constructor parameters."

    @abstractmethod
    def position(self, theta, phi):
        "Points X(theta, phi)."

    @abstractmethod
    def normal(self, theta, phi):
        "Outward unit normals at X(theta, phi)."

    @abstractmethod
    def area_density(self, theta, phi):
        "|X_theta x X_phi| / sin(theta)."

    @abstractmethod
    def inside(self, points):
        "Boolean mask of points strictly inside the shape."

    @abstractmethod
    def circumradius(self):
        "Radius of a ball about the origin containing the closed shape."

    def exact_area(self):
        "Surface area in closed form, or None."
        return None

    def exact_volume(self):
        "Enclosed volume in closed form, or None."
        return None

    def is_ball(self):
        "True if the shape is a round ball."
        return False

    def descriptor(self):
        "Serializable {shape, params}."
        return {"shape": self.name(), "params": self.params()}

    def tangents(self, theta, phi):
        "X_theta and X_phi by central differences."
        h = _FD_STEP
        x_t = (self.position(theta + h, phi) - self.position(theta - h, phi)) / (2 * h)
        x_p = (self.position(theta, phi + h) - self.position(theta, phi - h)) / (2 * h)
        return x_t, x_p

    def normal_derivatives(self, theta, phi):
        "nu_theta and nu_phi by central differences."
        h = _FD_STEP
        n_t = (self.normal(theta + h, phi) - self.normal(theta - h, phi)) / (2 * h)
        n_p = (self.normal(theta, phi + h) - self.normal(theta, phi - h)) / (2 * h)
        return n_t, n_p

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"<{self.__class__.__name__} ({args})>"


def _positive(label, value):
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise ConfigurationError(f"{label} must be a positive number, was {value}.")
    return value


class Sphere(AbstractShape):
    "Sphere of radius R about the origin."

    def __init__(self, R=1.0):
        self.radius = _positive("R", R)

    @classmethod
    def name(cls):
        return "sphere"

    def params(self):
        return {"R": self.radius}

    def position(self, theta, phi):
        e_r, _, _ = _spherical_frame(theta, phi)
        return self.radius * e_r

    def normal(self, theta, phi):
        return self.position(theta, phi) / self.radius

    def area_density(self, theta, phi):
        return np.full(np.shape(theta), self.radius**2)

    def inside(self, points):
        return np.einsum("ij,ij->i", points, points) < self.radius**2

    def is_ball(self):
        return True

    def circumradius(self):
        return self.radius

    def exact_area(self):
        return 4 * math.pi * self.radius**2

    def exact_volume(self):
        return 4 * math.pi * self.radius**3 / 3


class Ellipsoid(AbstractShape):
    "Axis-aligned ellipsoid with semiaxes a, b, c."

    def __init__(self, a=1.0, b=1.0, c=1.0):
        self.axes = (_positive("a", a), _positive("b", b), _positive("c", c))

    @classmethod
    def name(cls):
        return "ellipsoid"

    def params(self):
        a, b, c = self.axes
        return {"a": a, "b": b, "c": c}

    def position(self, theta, phi):
        a, b, c = self.axes
        st = np.sin(theta)
        return np.stack([a * st * np.cos(phi), b * st * np.sin(phi), c * np.cos(theta)], axis=-1)

    def normal(self, theta, phi):
        x = self.position(theta, phi)
        return _unit(x / np.square(self.axes))

    def area_density(self, theta, phi):
        a, b, c = self.axes
        s2 = np.sin(theta) ** 2
        return np.sqrt(
            b**2 * c**2 * s2 * np.cos(phi) ** 2
            + a**2 * c**2 * s2 * np.sin(phi) ** 2
            + a**2 * b**2 * np.cos(theta) ** 2
        )

    def inside(self, points):
        return np.sum(np.square(points / self.axes), axis=1) < 1.0

    def is_ball(self):
        return len(set(self.axes)) == 1

    def circumradius(self):
        return max(self.axes)

    def exact_area(self):
        a, b, c = sorted(self.axes, reverse=True)
        if a == c:
            return 4 * math.pi * a**2
        cos_phi = c / a
        phi = math.acos(cos_phi)
        sin_phi = math.sin(phi)
        m = (a**2 * (b**2 - c**2)) / (b**2 * (a**2 - c**2))
        elliptic = special.ellipeinc(phi, m) * sin_phi**2 + special.ellipkinc(phi, m) * cos_phi**2
        return 2 * math.pi * c**2 + 2 * math.pi * a * b * elliptic / sin_phi

    def exact_volume(self):
        a, b, c = self.axes
        return 4 * math.pi * a * b * c / 3


class PerturbedSphere(AbstractShape):
    """
    Axisymmetric star-shaped surface r(theta) = 1 + eps cos(m theta) sin^m(theta).

    |eps| <= 0.3 keeps r >= 0.7 and the surface smoothly embedded.
    """

    MAX_EPS = 0.3

    def __init__(self, eps=0.0, mode=2):
        eps = float(eps)
        if not abs(eps) <= self.MAX_EPS:
            raise ConfigurationError(f"|eps| must be <= {self.MAX_EPS}, was {eps}.")
        if int(mode) != mode or mode < 2:
            raise ConfigurationError(f"mode must be an integer >= 2, was {mode}.")
        self.eps = eps
        self.mode = int(mode)

    @classmethod
    def name(cls):
        return "perturbed"

    def params(self):
        return {"eps": self.eps, "mode": self.mode}

    def _radius(self, theta, phi):
        "r, r_theta and r_phi / sin(theta); the last is zero since r does not depend on phi."
        m, eps = self.mode, self.eps
        st, ct = np.sin(theta), np.cos(theta)
        r = 1.0 + eps * np.cos(m * theta) * st**m
        r_t = eps * m * (ct * np.cos(m * theta) * st ** (m - 1) - np.sin(m * theta) * st**m)
        r = np.broadcast_to(r, np.broadcast(theta, phi).shape)
        r_t = np.broadcast_to(r_t, r.shape)
        return r, r_t, np.zeros_like(r)

    def position(self, theta, phi):
        e_r, _, _ = _spherical_frame(theta, phi)
        r, _, _ = self._radius(theta, phi)
        return r[..., None] * e_r

    def normal(self, theta, phi):
        e_r, e_t, e_p = _spherical_frame(theta, phi)
        r, r_t, r_p = self._radius(theta, phi)
        return _unit(r[..., None] * e_r - r_t[..., None] * e_t - r_p[..., None] * e_p)

    def area_density(self, theta, phi):
        r, r_t, r_p = self._radius(theta, phi)
        return r * np.sqrt(r**2 + r_t**2 + r_p**2)

    def inside(self, points):
        dist = np.linalg.norm(points, axis=1)
        theta = np.arccos(np.clip(points[:, 2] / np.maximum(dist, 1e-300), -1.0, 1.0))
        phi = np.arctan2(points[:, 1], points[:, 0])
        r, _, _ = self._radius(theta, phi)
        return dist < r

    def is_ball(self):
        return self.eps == 0

    def circumradius(self):
        return 1.0 + abs(self.eps)

    def exact_area(self):
        return 4 * math.pi if self.eps == 0 else None

    def exact_volume(self):
        return 4 * math.pi / 3 if self.eps == 0 else None


__SHAPES__ = {
    "sphere": Sphere,
    "ellipsoid": Ellipsoid,
    "perturbed": PerturbedSphere,
}


def get_shape(shape_name, **params) -> AbstractShape:
    "Return the shape with the given name, built from params."
    if shape_name not in __SHAPES__:
        raise ConfigurationError(f"Unknown shape type '{shape_name}'")
    try:
        return __SHAPES__[shape_name](**params)
    except TypeError as e:
        raise ConfigurationError(f"Bad parameters for {shape_name}: {e}") from e


def supported_shapes():
    "List of registered shape names."
    return list(__SHAPES__)


def parse_shape(text):
    """
    Shape from a command-line string, e.g. "sphere:R=1",
    "ellipsoid:a=2,b=1,c=1" or "perturbed:eps=0.2,mode=2".
    """
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"Bad shape parameter '{item}' in '{text}'.")
        try:
            params[key.strip()] = int(value) if key.strip() == "mode" else float(value)
        except ValueError as e:
            raise ConfigurationError(f"Bad value for {key} in '{text}'.") from e
    return get_shape(name.strip(), **params)
