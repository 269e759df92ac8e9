"""
Tasks to run using Invoke.

Ref https://docs.pyinvoke.org/en/stable/index.html

Samples:

invoke lint
invoke test -a "-k seminorm"
invoke coverage --html
invoke reports

invoke --list          # list all tasks
invoke --help <cmd>    # See docstrings and help notes
"""

import os
import sys

from invoke import task, Collection
from perimflow.config.app_config import AppConfig
from perimflow.functionals.perimeter import a_max


@task
def lint(c):
    "Run pylint on perimflow/ and tests/."
    # Formats: https://pylint.pycqa.org/en/latest/user_guide/usage/output.html
    msgfmt = "--msg-template='{path} ({line:03d}): {msg} ({msg_id} {symbol})'"
    c.run(f"pylint {msgfmt} tasks.py perimflow/ tests/")


@task
def _ensure_regime(c):  # pylint: disable=unused-argument
    "Quits if the config's a grid is beyond its resolution. (Hidden task)"
    ac = AppConfig(AppConfig.default_config_filename())
    limit = a_max(ac.resolution)
    if max(ac.a_grid) > limit:
        print(
            f"""
        QUITTING TASK FOR UNRESOLVED A_GRID.
        config.yml has RESOLUTION = {ac.resolution}, so a must be <= {limit:g};
        A_GRID goes up to {max(ac.a_grid):g}.
        """
        )
        sys.exit(1)


@task(pre=[_ensure_regime], help={"args": "extra pytest arguments, in quotes"})
def test(c, args=""):
    """
    Unit and integration tests, without the slow ball features.
    """
    c.run(f"pytest --ignore=./tests/features {args}")


@task(pre=[_ensure_regime], help={"args": "extra pytest arguments, in quotes"})
def accept(c, args=""):
    """
    Feature tests: the N = 96 ball and the verify exit codes.
    """
    c.run(f"pytest tests/features {args}")


@task(pre=[_ensure_regime], help={"html": "open html report"})
def coverage(c, html=False):
    """
    Run coverage (using the unit and integration tests), open report if needed.
    """
    c.run("coverage run -m pytest tests/ --ignore=./tests/features")
    if html:
        c.run('coverage html --omit="tests/*"')
        c.run("open htmlcov/index.html")
    else:
        cmd = 'coverage report --sort=cover --show-missing --omit="tests/*"'
        c.run(cmd)


@task(post=[lint])
def black(c):
    "black-format things."
    c.run("python -m black .")


@task(pre=[_ensure_regime], help={"fmt": "csv or json; default = csv"})
def reports(c, fmt="csv"):
    """
    Sweep and check the ball and a prolate ellipsoid with the shipped
    config, writing the reports to the data path's reports folder.
    """
    ac = AppConfig(AppConfig.default_config_filename())
    os.makedirs(ac.reportspath, exist_ok=True)
    shapes = {"ball": "sphere:R=1", "prolate": "ellipsoid:a=2,b=1,c=1"}
    for label, shape in shapes.items():
        for command in ("sweep", "check"):
            out = os.path.join(ac.reportspath, f"{label}_{command}.{fmt}")
            c.run(f"verify {command} --shape {shape} --format {fmt} --out {out}", warn=True)
    print(f"Reports in {ac.reportspath}")


@task(pre=[test, accept])
def fulltest(c):  # pylint: disable=unused-argument
    """
    Every test, features included.
    """
    print("Done.")


@task(pre=[fulltest, black, lint])
def full(c):  # pylint: disable=unused-argument
    """
    All tests, then black and lint.
    """
    print("Done.")


ns = Collection()
ns.add_task(fulltest)
ns.add_task(full)
ns.add_task(lint)
ns.add_task(test)
ns.add_task(accept)
ns.add_task(coverage)
ns.add_task(black)
ns.add_task(reports)
