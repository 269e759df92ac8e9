"""
Named check tests.

The a-dependent checks run on a coarse sphere here, so only the record
layout is asserted; their accuracy is covered by the functional tests.
"""

import numpy as np
import pytest

from perimflow.cli.checks import (
    CHECK_ALIASES,
    CheckRecord,
    canonical_check,
    identity,
    needs_regime,
    resolve_checks,
    residual,
    run_checks,
    supported_checks,
)
from perimflow.cli.commands import CHECK_COLUMNS
from perimflow.cli.scenario import ScenarioConfig, ScenarioRun
from perimflow.config.app_config import DEFAULT_TOLERANCES
from perimflow.errors import ConfigurationError
from perimflow.functionals.model import InequalityReport, exact


@pytest.fixture(name="coarse_run")
def fixture_coarse_run():
    "Unit sphere at N = 16 with two a values."
    scenario = ScenarioConfig(
        shape="sphere:R=1",
        resolution=16,
        a_grid=(0.2, 0.5),
        r_grid=(0.0, 0.5),
        seed=42,
        mc_budget=4000,
        trunc_radius=3.0,
        tolerances=dict(DEFAULT_TOLERANCES),
    )
    return ScenarioRun(scenario)


def test_supported_checks():
    "Every check, in run order."
    assert supported_checks() == [
        "isoperimetric",
        "l1-seminorm",
        "derivative-sign",
        "perimeter-forms",
        "projected-normal",
        "kernel-derivatives",
        "weight-identities",
        "constants",
        "power-conjecture",
        "small-a-limit",
        "large-a-trend",
        "solid-angle",
    ]


def test_resolve_checks():
    "all expands; explicit names keep run order."
    assert resolve_checks(["all"]) == supported_checks()
    assert resolve_checks(["constants", "isoperimetric"]) == ["isoperimetric", "constants"]
    assert resolve_checks(["constants", "constants"]) == ["constants"]


def test_aliases_resolve_to_check_names():
    "Every short identifier names a registered check and resolves in run order."
    assert set(CHECK_ALIASES.values()) <= set(supported_checks())
    assert canonical_check("thm11") == "isoperimetric"
    assert canonical_check("constants") == "constants"
    assert resolve_checks(["lemma31", "thm11"]) == ["isoperimetric", "weight-identities"]
    assert resolve_checks(["id17", "perimeter-forms"]) == ["perimeter-forms"]
    assert needs_regime(["thm23"]) is True
    assert needs_regime(["lemma21", "conjecture5"]) is False


def test_resolve_unknown_check():
    "Unknown names are configuration errors."
    with pytest.raises(ConfigurationError, match="Unknown check type 'bogus'"):
        resolve_checks(["constants", "bogus"])


@pytest.mark.parametrize(
    "names,expected",
    [
        (["constants"], False),
        (["kernel-derivatives", "weight-identities", "isoperimetric"], False),
        (["derivative-sign"], True),
        (["constants", "large-a-trend"], True),
        (["all"], True),
    ],
)
def test_needs_regime(names, expected):
    "Only checks that evaluate functionals at a need the regime."
    assert needs_regime(names) is expected


def test_record_slack_and_counts():
    "slack is lhs - rhs; exploratory records never count."
    rec = CheckRecord("x", "a=1", 3.0, 1.0, 0.1, True, False)
    assert rec.slack == 2.0
    assert rec.counts
    assert not CheckRecord("x", "", 0.0, 1.0, 0.1, False, False, exploratory=True).counts


def test_record_columns():
    "as_record follows the report columns."
    rec = CheckRecord("x", "a=1", 3.0, 1.0, 0.1, True, False)
    assert tuple(rec.as_record()) == CHECK_COLUMNS
    assert rec.as_record()["slack"] == 2.0


def test_record_fields_are_builtin_types():
    "numpy scalars are converted so reports serialize and validate."
    lhs, rhs = np.float64(2.0), np.float64(1.0)
    rec = CheckRecord("x", "", lhs, rhs, 0.1, np.bool_(True), np.bool_(False))
    flat = rec.as_record()
    assert type(flat["satisfied"]) is bool and type(flat["equality_case"]) is bool
    assert type(flat["lhs"]) is float and type(flat["slack"]) is float


def test_residual_record():
    "Residual records compare against the tolerance."
    ok = residual("r", 1e-8, 1e-6, "p")
    assert ok.satisfied and ok.equality_case
    assert (ok.lhs, ok.rhs, ok.err, ok.param) == (1e-8, 0.0, 1e-6, "p")
    assert not residual("r", 1e-3, 1e-6).satisfied


def test_identity_record():
    "Identity records need both sides to agree within the error."
    close = InequalityReport("eq", exact(1.0, "one"), exact(1.0 + 1e-15, "one"))
    assert identity(close).satisfied
    far = InequalityReport("eq", exact(2.0, "two"), exact(1.0, "one"))
    rec = identity(far, "a=1")
    assert not rec.satisfied, "2 >= 1 holds but is not an equality"
    assert rec.param == "a=1"


def test_constants_check(coarse_run):
    "kappa and kappa~ without building the surface."
    records = run_checks(coarse_run, ["constants"])
    assert [r.param for r in records] == ["kappa", "kappa_tilde"]
    assert all(r.satisfied is True for r in records), records
    assert all(type(r.lhs) is float for r in records), "plain floats"
    assert "surface" not in coarse_run.__dict__, "constants must not touch the surface"


def test_kernel_derivatives_check(coarse_run):
    "ODE rows per dimension and three rows per kernel point."
    records = run_checks(coarse_run, ["kernel-derivatives"])
    assert len(records) == 3 + 3 * 9
    assert [r.param for r in records[:3]] == ["ode,d=3", "ode,d=4", "ode,d=5"]
    failed = [r for r in records if not r.satisfied]
    assert not failed, failed


def test_weight_identities_check(coarse_run):
    "Three rows per kernel point, the mass drift, and the normalizations."
    records = run_checks(coarse_run, ["weight-identities"])
    assert len(records) == 3 * 9 + 1 + 3
    assert records[-4].param == "f-mass-drift"
    assert records[-1].param == "normalization,a=2"
    failed = [r for r in records if not r.satisfied]
    assert not failed, failed


def test_a_dependent_record_layout(coarse_run):
    "One record per a, plus the pairwise decrease rows."
    records = run_checks(coarse_run, ["derivative-sign", "large-a-trend"])
    names = [(r.name, r.param) for r in records]
    assert names == [
        ("derivative-sign", "a=0.2"),
        ("derivative-sign", "a=0.5"),
        ("large-a-trend", "a=0.2"),
        ("large-a-trend", "a=0.5"),
        ("large-a-trend", "decrease,a=0.2..0.5"),
    ]


def test_power_conjecture_is_exploratory(coarse_run):
    "r = 0 is skipped; the remaining records never count."
    records = run_checks(coarse_run, ["power-conjecture"])
    assert [r.param for r in records] == ["r=0.5"]
    assert not records[0].counts


def test_perimeter_forms_layout(coarse_run):
    "Boundary and Monte Carlo perimeters, one record per a."
    records = run_checks(coarse_run, ["perimeter-forms"])
    assert [r.param for r in records] == ["a=0.2", "a=0.5"]
    assert all(r.err > 0 for r in records), "the Monte Carlo side carries an error"
