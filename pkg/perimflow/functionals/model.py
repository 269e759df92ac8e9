"""
Result carriers for the functionals.
"""

import math
from dataclasses import dataclass, field

# satisfied / equality_case decisions allow this many combined errors.
TOLERANCE_FACTOR = 3.0

# Error floor relative to |value|, for sums that are exact to rounding.
ROUNDING_FLOOR = 1e-12


@dataclass(frozen=True)
class FunctionalValue:
    """
    A computed functional.

    err is a quadrature error estimate (difference against the
    half-resolution surface) or a Monte Carlo standard error.
    n_terms counts the pairs or samples that went in.
    """

    value: float
    err: float
    n_terms: int
    tag: str
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.err >= 0:
            raise ValueError(f"err must be >= 0, was {self.err}.")
        if self.n_terms < 1:
            raise ValueError(f"n_terms must be >= 1, was {self.n_terms}.")

    def __repr__(self):
        return f"<{self.tag} = {self.value:.10g} +/- {self.err:.3g}>"


def exact(value, tag):
    "A FunctionalValue known in closed form."
    return FunctionalValue(value, ROUNDING_FLOOR * abs(value), 1, tag)


def refined(value, coarse_value, n_terms, tag, **extras):
    "FunctionalValue with err = |value - coarse_value| plus the rounding floor."
    err = abs(value - coarse_value) + ROUNDING_FLOOR * abs(value)
    return FunctionalValue(value, err, n_terms, tag, extras)


def combine(tag, terms, weights=None):
    """
    Linear combination sum(weight * term) with errors added in
    quadrature.
    """
    if weights is None:
        weights = [1.0] * len(terms)
    value = math.fsum(w * t.value for w, t in zip(weights, terms))
    err = math.sqrt(math.fsum((w * t.err) ** 2 for w, t in zip(weights, terms)))
    return FunctionalValue(value, err, max(t.n_terms for t in terms), tag)


@dataclass(frozen=True)
class InequalityReport:
    """
    lhs >= rhs, as computed.

    Exploratory reports carry a conjectured inequality: their
    verdicts are informational only.
    """

    name: str
    lhs: FunctionalValue
    rhs: FunctionalValue
    exploratory: bool = False

    @property
    def slack(self):
        "lhs - rhs."
        return self.lhs.value - self.rhs.value

    @property
    def combined_error(self):
        "Errors of both sides added in quadrature."
        return math.hypot(self.lhs.err, self.rhs.err)

    @property
    def satisfied(self):
        "slack >= -TOLERANCE_FACTOR * combined_error."
        return self.slack >= -TOLERANCE_FACTOR * self.combined_error

    @property
    def equality_case(self):
        "|slack| <= TOLERANCE_FACTOR * combined_error."
        return abs(self.slack) <= TOLERANCE_FACTOR * self.combined_error

    @property
    def strict(self):
        "slack > TOLERANCE_FACTOR * combined_error."
        return self.slack > TOLERANCE_FACTOR * self.combined_error

    def as_record(self):
        "Flat dict for reports."
        return {
            "name": self.name,
            "lhs": self.lhs.value,
            "rhs": self.rhs.value,
            "slack": self.slack,
            "satisfied": self.satisfied,
            "equality_case": self.equality_case,
            "err": self.combined_error,
            "exploratory": self.exploratory,
        }
