"""
App config tests
"""

import os

import pytest
import yaml

from perimflow.config.app_config import DEFAULT_TOLERANCES, AppConfig


def write_file(config_file, config_data):
    "Write config file."
    if "DATAPATH" not in config_data:
        config_data["DATAPATH"] = "data_path"
    with open(config_file, "w", encoding="utf-8") as file:
        yaml.dump(config_data, file)


def test_valid_config(tmp_path):
    "Valid path and config is ok."
    config_file = tmp_path / "valid_config.yaml"
    config_data = {"RESOLUTION": 48, "A_GRID": [0.5, 1], "SEED": 7}
    write_file(config_file, config_data)

    app_config = AppConfig(config_file)
    assert app_config.datapath == "data_path"
    assert app_config.surfacespath == os.path.join("data_path", "surfaces")
    assert app_config.reportspath == os.path.join("data_path", "reports")
    assert app_config.resolution == 48
    assert app_config.a_grid == [0.5, 1.0]
    assert app_config.seed == 7


def test_defaults_when_keys_missing(tmp_path):
    "Only DATAPATH given."
    config_file = tmp_path / "defaults.yaml"
    write_file(config_file, {})

    ac = AppConfig(config_file)
    assert ac.resolution == 96
    assert ac.mc_budget == 200000
    assert ac.r_grid == [0.0, 0.25, 0.5, 0.75]
    assert ac.kernel_rel_tol == 1e-10
    assert ac.solid_estimator == "boundary"
    assert ac.trunc_radius == "auto"
    assert ac.tolerances == DEFAULT_TOLERANCES


def test_tolerances_merge_with_defaults(tmp_path):
    "Keys given replace their defaults, the rest stay."
    config_file = tmp_path / "tolerances.yaml"
    write_file(config_file, {"TOLERANCES": {"ball_constancy": 0.05}})

    ac = AppConfig(config_file)
    assert ac.tolerances["ball_constancy"] == 0.05
    assert ac.tolerances["constants"] == DEFAULT_TOLERANCES["constants"]
    assert DEFAULT_TOLERANCES["ball_constancy"] == 0.01, "defaults untouched"


def test_shipped_config_loads(testconfig):
    "The config.yml in the package is valid."
    assert testconfig.resolution == 96
    assert testconfig.a_grid[-1] <= testconfig.resolution / 20
    assert os.path.basename(AppConfig.default_config_filename()) == "config.yml"
    assert os.path.isdir(AppConfig.configdir())


@pytest.mark.parametrize(
    "data,msg",
    [
        ({"RESOLUTION": 4}, "RESOLUTION must be >= 8, was 4."),
        ({"A_GRID": []}, "A_GRID must be non-empty and positive"),
        ({"A_GRID": [1, -1]}, "A_GRID must be non-empty and positive"),
        ({"R_GRID": [0.5, 1.0]}, r"R_GRID values must be in \[0, 1\)"),
        ({"SOLID_ESTIMATOR": "exact"}, "SOLID_ESTIMATOR must be boundary or mc, was exact."),
        ({"TRUNC_RADIUS": -2}, "TRUNC_RADIUS must be auto or positive"),
    ],
)
def test_bad_values_throw(tmp_path, data, msg):
    "Values are checked on load."
    config_file = tmp_path / "bad.yaml"
    write_file(config_file, data)
    with pytest.raises(ValueError, match=msg):
        AppConfig(config_file)


def test_numeric_trunc_radius(tmp_path):
    "A number is kept as a float."
    config_file = tmp_path / "trunc.yaml"
    write_file(config_file, {"TRUNC_RADIUS": 6})
    assert AppConfig(config_file).trunc_radius == 6.0


def test_system_specific_datapath_returned_if_DATAPATH_not_specified(tmp_path):
    """
    Using library to get platform-specific paths.  Tests will
    hardcode the appropriate system path.
    """
    config_file = tmp_path / "default_datapath.yaml"
    with open(config_file, "w", encoding="utf-8") as file:
        yaml.dump({"SEED": 1}, file)

    app_config = AppConfig(config_file)

    # The exact path varies by system.
    assert "perimflow" in app_config.datapath


def test_invalid_yaml_throws(tmp_path):
    "File must be a yaml dictionary."
    config_file = tmp_path / "invalid_yaml.yaml"
    with open(config_file, "w", encoding="utf-8") as f:
        f.write("bad_data")

    with pytest.raises(RuntimeError, match="is not a yaml dictionary"):
        AppConfig(config_file)


def test_nonexistent_config_file_throws(tmp_path):
    "File must exist."
    config_file = tmp_path / "nonexistent_config.yaml"
    with pytest.raises(FileNotFoundError, match="No such file"):
        AppConfig(config_file)
