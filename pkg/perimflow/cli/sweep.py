"""
The phi curve over the a grid.

Every row carries phi, its two terms, the closed-form derivative, the
nonlocal perimeter and the slack of the derivative inequality.  A row
is satisfied when that slack is non-negative within error and

  - on a ball, phi is within the ball_constancy tolerance of its
    constant value kappa kappa~ |dOmega|;
  - otherwise, phi lies below the previous row's phi by more than
    TOLERANCE_FACTOR times their combined error.

A non-finite phi never satisfies a row.
"""

import logging
import math
from dataclasses import dataclass
from typing import List

from perimflow.functionals.model import TOLERANCE_FACTOR, combine
from perimflow.functionals.monotone import (
    check_derivative_inequality,
    limit_large_a,
    phi_terms,
)
from perimflow.functionals.perimeter import nonlocal_perimeter_boundary, nonlocal_perimeter_mc
from perimflow.surface.shapes import parse_shape

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = (
    "a",
    "phi",
    "phi_err",
    "phi_boundary_term",
    "phi_solid_term",
    "phi_derivative",
    "phi_derivative_err",
    "lambda",
    "derivative_slack",
    "satisfied",
)


@dataclass(frozen=True)
class SweepRow:  # pylint: disable=too-many-instance-attributes
    "One a of the sweep."

    a: float
    phi: float
    phi_err: float
    phi_boundary_term: float
    phi_solid_term: float
    phi_derivative: float
    phi_derivative_err: float
    lam: float
    derivative_slack: float
    satisfied: bool

    def as_record(self):
        "Flat dict in SWEEP_COLUMNS order."
        return {
            "a": self.a,
            "phi": self.phi,
            "phi_err": self.phi_err,
            "phi_boundary_term": self.phi_boundary_term,
            "phi_solid_term": self.phi_solid_term,
            "phi_derivative": self.phi_derivative,
            "phi_derivative_err": self.phi_derivative_err,
            "lambda": self.lam,
            "derivative_slack": self.derivative_slack,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class SweepReport:
    "Rows of a sweep, one per a_grid entry, ascending in a."

    rows: List[SweepRow]

    @property
    def passed(self):
        "True if every row is satisfied."
        return all(row.satisfied for row in self.rows)

    def records(self):
        "List of row dicts."
        return [row.as_record() for row in self.rows]


def _lambda(run, ctx):
    if run.scenario.solid == "mc":
        return nonlocal_perimeter_mc(run.sampler, ctx).value
    return nonlocal_perimeter_boundary(run.surface, ctx).value


def shape_verdict(total, previous, constant=None, tol=0.0):
    """
    Ball rows (constant given) need phi within tol of constant; other
    rows need a strict decrease from the previous FunctionalValue.  The
    first non-ball row has nothing to compare against and passes.
    """
    if not math.isfinite(total.value):
        return False
    if constant is not None:
        return abs(total.value - constant) <= tol * constant
    if previous is None:
        return True
    allowed = TOLERANCE_FACTOR * math.hypot(total.err, previous.err)
    return previous.value - total.value > allowed


def run_sweep(run):
    "SweepReport for the scenario of run."
    surface = run.surface
    sampler = run.solid_sampler
    is_ball = parse_shape(run.scenario.shape).is_ball()
    constant = limit_large_a(surface).value
    tol = run.scenario.tolerances["ball_constancy"]

    rows = []
    previous = None
    for ctx in run.contexts():
        w_term, solid = phi_terms(surface, sampler, ctx)
        total = combine("phi", [w_term, solid])
        report = check_derivative_inequality(surface, sampler, ctx)

        shape_ok = shape_verdict(total, previous, constant if is_ball else None, tol)
        logger.debug("a=%g: %r, %r", ctx.a, total, report.lhs)

        rows.append(
            SweepRow(
                a=ctx.a,
                phi=total.value,
                phi_err=total.err,
                phi_boundary_term=w_term.value,
                phi_solid_term=solid.value,
                phi_derivative=-report.lhs.value,
                phi_derivative_err=report.lhs.err,
                lam=_lambda(run, ctx),
                derivative_slack=report.slack,
                satisfied=bool(report.satisfied and shape_ok),
            )
        )
        previous = total
    return SweepReport(rows)
