"""
Common fixtures used by many tests.

Surfaces are session-scoped: the pair sums on them are cached per
surface object, so sharing one object across tests keeps the suite
from recomputing the same boundary integrals.
"""

import os

import pytest
import yaml

from perimflow.config.app_config import AppConfig
from perimflow.surface.model import make_ellipsoid, make_sphere


def pytest_sessionstart(session):  # pylint: disable=unused-argument
    """
    Ensure the shipped config is usable for test runs.

    The tests rely on the default config loading cleanly and on a
    resolution large enough for the a grid it ships with.
    """
    configfile = AppConfig.default_config_filename()
    with open(configfile, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f)

    failures = []
    if not isinstance(config, dict):
        failures.append("config.yml is not a yaml dictionary")
    else:
        ac = AppConfig(configfile)
        if max(ac.a_grid) > ac.resolution / 20:
            failures.append("A_GRID goes beyond RESOLUTION / 20")
    if len(failures) > 0:
        msg = f"Bad config.yml: {', '.join(failures)}"
        pytest.exit(msg)


@pytest.fixture(name="testconfig")
def fixture_config():
    "Config using the app config."
    ac = AppConfig(AppConfig.default_config_filename())
    yield ac


@pytest.fixture(name="config_file")
def fixture_config_file(tmp_path):
    """
    Writer for a config file in tmp_path; call it with the keys to set.
    DATAPATH always points into tmp_path.
    """

    def _write(**values):
        data = {"DATAPATH": os.path.join(str(tmp_path), "data")}
        data.update(values)
        path = tmp_path / "config.yml"
        with open(path, "w", encoding="utf-8") as f:
            yaml.dump(data, f)
        return str(path)

    return _write


@pytest.fixture(name="sphere48", scope="session")
def fixture_sphere48():
    "Unit sphere at N = 48."
    return make_sphere(1.0, 48)


@pytest.fixture(name="sphere96", scope="session")
def fixture_sphere96():
    "Unit sphere at N = 96."
    return make_sphere(1.0, 96)


@pytest.fixture(name="ellipsoid48", scope="session")
def fixture_ellipsoid48():
    "Prolate ellipsoid (2, 1, 1) at N = 48."
    return make_ellipsoid((2.0, 1.0, 1.0), 48)


@pytest.fixture(name="ellipsoid96", scope="session")
def fixture_ellipsoid96():
    "Prolate ellipsoid (2, 1, 1) at N = 96."
    return make_ellipsoid((2.0, 1.0, 1.0), 96)
