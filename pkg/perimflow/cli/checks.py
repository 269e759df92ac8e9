"""
Named verification checks for `verify check`.

Each check takes a ScenarioRun and returns a list of CheckRecords,
one per parameter value it looks at.  Inequality checks pass when
lhs >= rhs within the error; identity checks pass when both sides
agree within the error or the configured tolerance.
"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from perimflow.errors import ConfigurationError
from perimflow.functionals.model import InequalityReport, exact
from perimflow.functionals.monotone import (
    check_derivative_inequality,
    check_isoperimetric_seminorm,
    check_l1_seminorm,
    check_power_conjecture,
    check_projected_normal_identity,
    check_solid_angle,
    limit_large_a,
    limit_small_a,
    phi,
)
from perimflow.functionals.perimeter import nonlocal_perimeter_boundary, nonlocal_perimeter_mc
from perimflow.kernels.green import KernelContext, kappa, kappa_tilde, kernel_f
from perimflow.kernels.identities import (
    f_identity_residual,
    f_mass_drift,
    monotone_factor,
    normalization,
    ode_residual,
    potential_derivative_residual,
    second_derivative_residual,
    tail_integral_residual,
)

logger = logging.getLogger(__name__)

# Sample points for the kernel identity checks.
KERNEL_A_VALUES = (0.5, 1.0, 2.0)
KERNEL_R_VALUES = (0.5, 1.0, 2.0)
ODE_DIMENSIONS = (3, 4, 5)
ODE_T_VALUES = np.geomspace(0.1, 20.0, 60)


@dataclass(frozen=True)
class CheckRecord:  # pylint: disable=too-many-instance-attributes
    "One row of a check report."

    name: str
    param: str
    lhs: float
    rhs: float
    err: float
    satisfied: bool
    equality_case: bool
    exploratory: bool = False

    @property
    def slack(self):
        "lhs - rhs."
        return self.lhs - self.rhs

    @property
    def counts(self):
        "True if the record can fail the run."
        return not self.exploratory

    def as_record(self):
        "Flat dict in report column order."
        return {
            "name": self.name,
            "param": self.param,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "slack": float(self.slack),
            "err": float(self.err),
            "satisfied": bool(self.satisfied),
            "equality_case": bool(self.equality_case),
            "exploratory": bool(self.exploratory),
        }


def inequality(report, param=""):
    "Record for lhs >= rhs."
    return CheckRecord(
        name=report.name,
        param=param,
        lhs=report.lhs.value,
        rhs=report.rhs.value,
        err=report.combined_error,
        satisfied=bool(report.satisfied),
        equality_case=bool(report.equality_case),
        exploratory=report.exploratory,
    )


def identity(report, param=""):
    "Record for lhs == rhs within the combined error."
    record = inequality(report, param)
    return replace(record, satisfied=record.equality_case)


def residual(name, value, tol, param=""):
    "Record for a non-negative residual that must stay below tol."
    ok = bool(value <= tol)
    return CheckRecord(name, param, float(value), 0.0, tol, ok, ok)


def _a_param(ctx):
    return f"a={ctx.a:g}"


def _isoperimetric(run):
    return [inequality(check_isoperimetric_seminorm(run.surface))]


def _l1_seminorm(run):
    return [inequality(check_l1_seminorm(run.surface))]


def _derivative_sign(run):
    return [
        inequality(check_derivative_inequality(run.surface, run.solid_sampler, ctx), _a_param(ctx))
        for ctx in run.contexts()
    ]


def _perimeter_forms(run):
    out = []
    for ctx in run.contexts():
        boundary = nonlocal_perimeter_boundary(run.surface, ctx)
        mc = nonlocal_perimeter_mc(run.sampler, ctx)
        report = InequalityReport("perimeter-forms", boundary, mc)
        out.append(identity(report, _a_param(ctx)))
    return out


def _projected_normal(run):
    out = []
    for ctx in run.contexts():
        value = check_projected_normal_identity(run.surface, run.solid_sampler, ctx)
        report = InequalityReport("projected-normal", value, exact(0.0, "zero"))
        out.append(identity(report, _a_param(ctx)))
    return out


def _kernel_points(run):
    tol = run.scenario.kernel_rel_tol
    for a in KERNEL_A_VALUES:
        ctx = KernelContext(3, a, tol)
        for r in KERNEL_R_VALUES:
            yield ctx, r, f"a={a:g},r={r:g}"


def _kernel_derivatives(run):
    tol = run.scenario.tolerances["kernel_identity"]
    ode_tol = run.scenario.tolerances["bessel_ode"]
    name = "kernel-derivatives"
    out = [
        residual(name, ode_residual(d / 2.0 - 1.0, ODE_T_VALUES), ode_tol, f"ode,d={d}")
        for d in ODE_DIMENSIONS
    ]
    for ctx, r, param in _kernel_points(run):
        out.append(residual(name, potential_derivative_residual(ctx, r), tol, f"first,{param}"))
        out.append(residual(name, second_derivative_residual(ctx, r), tol, f"second,{param}"))
        factor = float(monotone_factor(ctx, r))
        negative = bool(factor < 0)
        out.append(CheckRecord(name, f"negative,{param}", factor, 0.0, 0.0, negative, False))
    return out


def _weight_identities(run):
    tol = run.scenario.tolerances["kernel_identity"]
    name = "weight-identities"
    out = []
    for ctx, r, param in _kernel_points(run):
        out.append(residual(name, f_identity_residual(ctx, r), tol, f"f-identity,{param}"))
        out.append(residual(name, tail_integral_residual(ctx, r), tol, f"tail,{param}"))
        f = float(kernel_f(ctx, r).value)
        out.append(CheckRecord(name, f"f-positive,{param}", f, 0.0, 0.0, bool(f > 0), False))
    drift = f_mass_drift(3, KERNEL_A_VALUES)
    out.append(residual(name, drift, tol, "f-mass-drift"))
    for a in KERNEL_A_VALUES:
        mass = normalization(KernelContext(3, a, run.scenario.kernel_rel_tol))
        out.append(residual(name, abs(mass - 1.0), tol, f"normalization,a={a:g}"))
    return out


def _constants(run):
    tol = run.scenario.tolerances["constants"]
    rel_tol = run.scenario.kernel_rel_tol
    out = []
    for label, value, target in (
        ("kappa", kappa(3, rel_tol).value, 1.0 / (4.0 * math.pi)),
        ("kappa_tilde", kappa_tilde(3, rel_tol).value, 4.0 * math.pi),
    ):
        value = float(value)
        ok = bool(abs(value - target) <= tol)
        out.append(CheckRecord("constants", label, value, target, tol, ok, ok))
    return out


def _power_conjecture(run):
    return [
        inequality(check_power_conjecture(run.surface, r), f"r={r:g}")
        for r in run.scenario.r_grid
        if r > 0
    ]


def _small_a_limit(run):
    tol = run.scenario.tolerances["small_a_limit"]
    ctx = run.contexts()[0]
    report = limit_small_a(run.surface, run.solid_sampler, ctx)
    ok = bool(abs(report.slack) <= tol * abs(report.rhs.value))
    return [replace(inequality(report, _a_param(ctx)), satisfied=ok, equality_case=ok)]


def _large_a_trend(run):
    """
    phi stays above its large-a limit at every a and does not
    increase from one a to the next.
    """
    limit = limit_large_a(run.surface)
    values = [(ctx, phi(run.surface, run.solid_sampler, ctx)) for ctx in run.contexts()]
    out = [
        inequality(InequalityReport("large-a-trend", value, limit), _a_param(ctx))
        for ctx, value in values
    ]
    for (lo_ctx, lo), (hi_ctx, hi) in zip(values, values[1:]):
        report = InequalityReport("large-a-trend", lo, hi)
        out.append(inequality(report, f"decrease,a={lo_ctx.a:g}..{hi_ctx.a:g}"))
    return out


def _solid_angle(run):
    return [identity(check_solid_angle(run.surface))]


__CHECKS__ = {
    "isoperimetric": _isoperimetric,
    "l1-seminorm": _l1_seminorm,
    "derivative-sign": _derivative_sign,
    "perimeter-forms": _perimeter_forms,
    "projected-normal": _projected_normal,
    "kernel-derivatives": _kernel_derivatives,
    "weight-identities": _weight_identities,
    "constants": _constants,
    "power-conjecture": _power_conjecture,
    "small-a-limit": _small_a_limit,
    "large-a-trend": _large_a_trend,
    "solid-angle": _solid_angle,
}

# Short identifiers accepted in place of the check names.
CHECK_ALIASES = {
    "thm11": "isoperimetric",
    "ineq2": "l1-seminorm",
    "thm23": "derivative-sign",
    "id17": "perimeter-forms",
    "id18": "projected-normal",
    "lemma21": "kernel-derivatives",
    "lemma31": "weight-identities",
    "conjecture5": "power-conjecture",
}

# Checks that never touch a surface functional with a.
_A_FREE = (
    "isoperimetric",
    "l1-seminorm",
    "kernel-derivatives",
    "weight-identities",
    "constants",
    "power-conjecture",
    "solid-angle",
)


def supported_checks():
    "Check names in run order."
    return list(__CHECKS__)


def canonical_check(name):
    "The check name behind an alias, or name itself."
    return CHECK_ALIASES.get(name, name)


def resolve_checks(names):
    """
    Expand "all", map aliases and validate names; ConfigurationError
    on an unknown name.  Order follows supported_checks().
    """
    wanted = {canonical_check(n) for n in names}
    if "all" in wanted:
        return supported_checks()
    unknown = sorted(wanted - set(__CHECKS__))
    if unknown:
        raise ConfigurationError(f"Unknown check type '{unknown[0]}'")
    return [n for n in __CHECKS__ if n in wanted]


def needs_regime(names):
    "True if any of the checks evaluates boundary functionals at a."
    return any(canonical_check(n) not in _A_FREE for n in names)


def run_checks(run, names):
    "All records for the named checks, in order."
    records = []
    for name in resolve_checks(names):
        logger.debug("running check %s", name)
        records.extend(__CHECKS__[name](run))
    return records
