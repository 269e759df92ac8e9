"""
The `verify` command line.

  verify sweep    phi curve over the a grid
  verify check    named inequality and identity checks
  verify export   write the quadrature surface as JSON

Exit codes: 0 all checks pass; 2 a check failed; 3 bad configuration
(including a beyond the resolution's regime); 4 I/O error.
"""

import functools
import logging
import os

import click

from perimflow.cli.checks import (
    CHECK_ALIASES,
    canonical_check,
    needs_regime,
    run_checks,
    supported_checks,
)
from perimflow.cli.report import Report, build_header, write_report
from perimflow.cli.scenario import OUTPUT_FORMATS, ScenarioConfig, ScenarioRun, parse_grid
from perimflow.cli.sweep import SWEEP_COLUMNS, run_sweep
from perimflow.config.app_config import AppConfig
from perimflow.errors import AccuracyError, ConfigurationError, DomainError
from perimflow.surface.io import save_surface

EXIT_FAILED = 2
EXIT_CONFIG = 3
EXIT_IO = 4

CHECK_COLUMNS = (
    "name",
    "param",
    "lhs",
    "rhs",
    "slack",
    "err",
    "satisfied",
    "equality_case",
    "exploratory",
)


def _print(s):
    """
    Print message to stderr, so reports on stdout stay clean.
    """
    if isinstance(s, str):
        s = s.split("\n")
    msg = "\n".join(f"  {lin}" for lin in s)
    click.echo(msg, err=True)


def _setup_logging(verbose):
    logging.basicConfig(format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    level = logging.DEBUG if verbose else logging.WARNING
    logging.getLogger("perimflow").setLevel(level)


def _trunc_radius(value):
    if value is None or value == "auto":
        return value
    try:
        return float(value)
    except ValueError as e:
        raise ConfigurationError(f"trunc-radius must be auto or a number, was '{value}'.") from e


def _app_config(config_path):
    "AppConfig from config_path, or the shipped defaults."
    try:
        return AppConfig(config_path or AppConfig.default_config_filename())
    except (ValueError, RuntimeError) as e:
        raise ConfigurationError(str(e)) from e


def _scenario(app_config, options):
    "ScenarioConfig from the config file plus the command line options."
    overrides = {
        "shape": options["shape"],
        "resolution": options["resolution"],
        "seed": options["seed"],
        "mc_budget": options["mc_budget"],
        "solid": options["solid"],
        "trunc_radius": _trunc_radius(options["trunc_radius"]),
        "out": options["out"],
        "fmt": options["fmt"],
    }
    for key in ("a_grid", "r_grid"):
        if options[key] is not None:
            overrides[key] = parse_grid(options[key], key.replace("_", "-"))
    return ScenarioConfig.from_app_config(app_config, **overrides)


def scenario_options(func):
    "Options shared by every command."
    options = [
        click.option(
            "--shape",
            default=None,
            help="sphere:R=1 | ellipsoid:a=2,b=1,c=1 | perturbed:eps=0.2,mode=2",
        ),
        click.option(
            "--resolution", "-N", type=int, default=None, help="Polar nodes N (2N^2 nodes)."
        ),
        click.option("--a-grid", default=None, help="Comma separated a values."),
        click.option("--r-grid", default=None, help="Comma separated r values in [0, 1)."),
        click.option("--seed", type=int, default=None, help="Monte Carlo seed."),
        click.option(
            "--mc-budget",
            type=int,
            default=None,
            help="Monte Carlo points, split between inside and outside.",
        ),
        click.option(
            "--solid",
            type=click.Choice(["boundary", "mc"]),
            default=None,
            help="Solid term estimator.",
        ),
        click.option("--trunc-radius", default=None, help="auto, or the sampler ball radius."),
        click.option(
            "--out",
            type=click.Path(dir_okay=False),
            default=None,
            help="Output file; stdout if not set.",
        ),
        click.option(
            "--format",
            "fmt",
            type=click.Choice(OUTPUT_FORMATS),
            default="csv",
            show_default=True,
        ),
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False),
            default=None,
            help="Path to override config file.  Uses perimflow/config/config.yml if not set.",
        ),
        click.option("--verbose", "-v", is_flag=True, help="Debug logging to stderr."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def handle_errors(func):
    "Map library errors to exit codes."

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except (ConfigurationError, DomainError) as e:
            _print(f"Configuration error: {e}")
            ctx.exit(EXIT_CONFIG)
        except AccuracyError as e:
            _print(f"Accuracy error: {e} (best estimate {e.best_estimate})")
            ctx.exit(EXIT_FAILED)
        except OSError as e:
            _print(f"I/O error: {e}")
            ctx.exit(EXIT_IO)
        return None

    return wrapper


@click.group()
@click.version_option(package_name="perimflow", message="%(prog)s %(version)s")
def cli():
    "Numerical verification of the nonlocal isoperimetric functionals."


@cli.command("sweep")
@scenario_options
@handle_errors
def sweep(verbose, config_path, **options):
    """
    Tabulate phi over the a grid.

    \b
    CSV columns, in order:
      a, phi, phi_err, phi_boundary_term, phi_solid_term,
      phi_derivative, phi_derivative_err, lambda, derivative_slack,
      satisfied
    """
    _setup_logging(verbose)
    scenario = _scenario(_app_config(config_path), options)
    scenario.check_regime()
    result = run_sweep(ScenarioRun(scenario))
    header = build_header(scenario, result.passed)
    report = Report("sweep", header, SWEEP_COLUMNS, result.records())
    write_report(report, scenario.out, scenario.fmt)

    failed = [row.a for row in result.rows if not row.satisfied]
    if failed:
        _print(f"sweep: {len(failed)} of {len(result.rows)} rows failed, a = {failed}")
        click.get_current_context().exit(EXIT_FAILED)
    _print(f"sweep: {len(result.rows)} rows, all satisfied.")


def _check_names(ctx, param, value):  # pylint: disable=unused-argument
    names = [n.strip() for n in value.split(",") if n.strip()]
    known = set(supported_checks()) | set(CHECK_ALIASES) | {"all"}
    unknown = [n for n in names if n not in known]
    if unknown or not names:
        raise click.BadParameter(
            f"unknown check '{unknown[0] if unknown else value}'; "
            f"choose from all, {', '.join(supported_checks())}."
        )
    return [canonical_check(n) for n in names]


@cli.command("check")
@scenario_options
@click.option(
    "--checks",
    default="all",
    show_default=True,
    callback=_check_names,
    help="Comma separated check names or their short identifiers, or all.",
)
@handle_errors
def check(verbose, config_path, checks, **options):
    """
    Run named checks.

    \b
    CSV columns, in order:
      name, param, lhs, rhs, slack, err, satisfied, equality_case,
      exploratory
    Exploratory records (power-conjecture) never fail the run.
    """
    _setup_logging(verbose)
    scenario = _scenario(_app_config(config_path), options)
    if needs_regime(checks):
        scenario.check_regime()
    records = run_checks(ScenarioRun(scenario), checks)
    failed = [r for r in records if r.counts and not r.satisfied]
    report = Report(
        "check",
        build_header(scenario, not failed),
        CHECK_COLUMNS,
        [r.as_record() for r in records],
    )
    write_report(report, scenario.out, scenario.fmt)

    if failed:
        _print([f"FAILED {r.name} {r.param}: slack {r.slack:.6g}, err {r.err:.3g}" for r in failed])
        click.get_current_context().exit(EXIT_FAILED)
    _print(f"check: {len(records)} records, all satisfied.")


@cli.command("export")
@scenario_options
@handle_errors
def export(verbose, config_path, **options):
    """
    Write the quadrature surface as JSON.  Without --out the file goes
    to the surfaces folder of the data path.
    """
    _setup_logging(verbose)
    app_config = _app_config(config_path)
    scenario = _scenario(app_config, options)
    run = ScenarioRun(scenario)
    out = scenario.out
    if out is None:
        folder = app_config.surfacespath
        os.makedirs(folder, exist_ok=True)
        name = scenario.shape.replace(":", "_").replace(",", "_").replace("=", "")
        out = os.path.join(folder, f"{name}_N{scenario.resolution}.json")
    save_surface(run.surface, out)
    _print(f"export: {run.surface.size} nodes written to {out}")
