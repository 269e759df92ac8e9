"""
Scenario configuration shared by the verify commands.

A ScenarioConfig is built from the AppConfig defaults plus command
line overrides.  Its hash covers every field that changes a computed
number, so two reports with the same hash are comparable.
"""

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Optional, Tuple

from perimflow.errors import ConfigurationError, RegimeError
from perimflow.functionals.perimeter import a_max
from perimflow.kernels.green import KernelContext
from perimflow.surface.model import MIN_RESOLUTION, build_surface
from perimflow.surface.sampler import auto_trunc_radius, sample_volume
from perimflow.surface.shapes import parse_shape

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("csv", "json")

# Fields left out of the config hash.
_UNHASHED = ("out", "fmt")


def parse_grid(text, label):
    "Tuple of floats from '0.1,0.5,1'.  Blank entries are ignored."
    values = []
    for item in filter(None, (p.strip() for p in text.split(","))):
        try:
            values.append(float(item))
        except ValueError as e:
            raise ConfigurationError(f"{label} entries must be numbers, was '{item}'.") from e
    return tuple(values)


@dataclass(frozen=True)
class ScenarioConfig:  # pylint: disable=too-many-instance-attributes
    """
    Everything a verify command needs to reproduce its numbers.

    a_grid is stored sorted ascending without duplicates.
    trunc_radius is "auto" or a positive float.
    """

    shape: str
    resolution: int
    a_grid: Tuple[float, ...]
    r_grid: Tuple[float, ...]
    seed: int
    mc_budget: int
    trunc_radius: object = "auto"
    solid: str = "boundary"
    kernel_rel_tol: float = 1e-10
    tolerances: dict = field(default_factory=dict)
    out: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        # Canonical forms, so equal scenarios hash equally.
        descriptor = parse_shape(self.shape).descriptor()
        object.__setattr__(self, "shape", _shape_string(descriptor))
        object.__setattr__(self, "a_grid", tuple(sorted(set(float(a) for a in self.a_grid))))
        object.__setattr__(self, "r_grid", tuple(float(r) for r in self.r_grid))
        self._validate()

    def _validate(self):
        if self.resolution < MIN_RESOLUTION:
            raise ConfigurationError(
                f"resolution must be >= {MIN_RESOLUTION}, was {self.resolution}."
            )
        if len(self.a_grid) == 0:
            raise ConfigurationError("a_grid must not be empty.")
        if self.a_grid[0] <= 0:
            raise ConfigurationError(f"a_grid values must be positive, was {self.a_grid[0]}.")
        bad = [r for r in self.r_grid if not 0.0 <= r < 1.0]
        if bad:
            raise ConfigurationError(f"r_grid values must be in [0, 1), was {bad}.")
        if self.mc_budget < 1:
            raise ConfigurationError(f"mc_budget must be positive, was {self.mc_budget}.")
        if self.solid not in ("boundary", "mc"):
            raise ConfigurationError(f"solid must be boundary or mc, was {self.solid}.")
        if self.trunc_radius != "auto" and not float(self.trunc_radius) > 0:
            raise ConfigurationError(
                f"trunc_radius must be auto or positive, was {self.trunc_radius}."
            )
        if self.fmt not in OUTPUT_FORMATS:
            raise ConfigurationError(f"format must be csv or json, was {self.fmt}.")

    def check_regime(self):
        "RegimeError if the largest a is beyond what the resolution resolves."
        limit = a_max(self.resolution)
        if self.a_grid[-1] > limit:
            raise RegimeError(
                f"a = {self.a_grid[-1]:g} exceeds a_max = {limit:g} "
                f"for resolution {self.resolution}; raise --resolution or trim --a-grid."
            )

    def hashed_fields(self):
        "Dict of the fields that go into the hash."
        fields = asdict(self)
        for name in _UNHASHED:
            fields.pop(name)
        return fields

    def config_hash(self):
        "sha256 of the canonical JSON of hashed_fields()."
        canonical = json.dumps(self.hashed_fields(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def context(self, a):
        "d = 3 KernelContext at a."
        return KernelContext(3, a, self.kernel_rel_tol)

    @classmethod
    def from_app_config(cls, app_config, **overrides):
        """
        Scenario from AppConfig defaults; overrides that are None keep
        the default.
        """
        values = {
            "shape": "sphere:R=1",
            "resolution": app_config.resolution,
            "a_grid": app_config.a_grid,
            "r_grid": app_config.r_grid,
            "seed": app_config.seed,
            "mc_budget": app_config.mc_budget,
            "trunc_radius": app_config.trunc_radius,
            "solid": app_config.solid_estimator,
            "kernel_rel_tol": app_config.kernel_rel_tol,
            "tolerances": dict(app_config.tolerances),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def _shape_string(descriptor):
    params = ",".join(f"{k}={v}" for k, v in descriptor["params"].items())
    return f"{descriptor['shape']}:{params}"


class ScenarioRun:
    """
    Lazily built surface and sampler for one scenario.

    The sampler is shared by every a, so Monte Carlo estimates across
    the grid use common random numbers.
    """

    def __init__(self, scenario):
        self.scenario = scenario

    @cached_property
    def surface(self):
        "QuadratureSurface at the scenario resolution."
        return build_surface(parse_shape(self.scenario.shape), self.scenario.resolution)

    @cached_property
    def trunc_radius(self):
        "Truncation radius of the sampler ball."
        if self.scenario.trunc_radius == "auto":
            radius = auto_trunc_radius(self.surface, self.scenario.a_grid[0])
            logger.debug("auto trunc_radius = %g", radius)
            return radius
        return float(self.scenario.trunc_radius)

    @cached_property
    def sampler(self):
        "VolumeSampler with the Monte Carlo budget split evenly."
        budget = self.scenario.mc_budget
        n_inside = budget // 2
        return sample_volume(
            self.surface, self.trunc_radius, n_inside, budget - n_inside, self.scenario.seed
        )

    @property
    def solid_sampler(self):
        "Sampler for the solid term, or None for the boundary form."
        return self.sampler if self.scenario.solid == "mc" else None

    def contexts(self):
        "KernelContext per a_grid entry."
        return [self.scenario.context(a) for a in self.scenario.a_grid]
