"""
Defaults for the verify commands, read from config.yml.
"""

import os
import yaml
from platformdirs import PlatformDirs

SOLID_ESTIMATORS = ("boundary", "mc")

DEFAULT_TOLERANCES = {
    # Relative spread allowed in the phi column of a ball sweep.
    "ball_constancy": 0.01,
    # Absolute agreement for kappa and kappa~ against 1/(4 pi) and 4 pi.
    "constants": 1e-6,
    # Relative residual allowed in the Bessel ODE.
    "bessel_ode": 1e-6,
    # Relative residual allowed in the finite-difference kernel identities.
    "kernel_identity": 1e-4,
    # Relative gap allowed between phi at the smallest a and kappa [nu]^2_0.
    "small_a_limit": 0.02,
}


class AppConfig:  # pylint: disable=too-many-instance-attributes
    """
    Scenario defaults from a yaml file.

    Holds the scenario defaults the CLI starts from; every value
    can be overridden per run.
    """

    def __init__(self, config_file_path):
        """
        Load config_file_path; see config.yml for the keys.
        """
        self._load_config(config_file_path)

    def _load_config(self, config_file_path):
        """
        Read the yaml dictionary and validate each value.
        """
        with open(config_file_path, "r", encoding="utf-8") as cf:
            config = yaml.safe_load(cf)

        if not isinstance(config, dict):
            raise RuntimeError(
                f"File at {config_file_path} is invalid or is not a yaml dictionary."
            )

        self.resolution = int(config.get("RESOLUTION", 96))
        if self.resolution < 8:
            raise ValueError(f"RESOLUTION must be >= 8, was {self.resolution}.")

        self.mc_budget = int(config.get("MC_BUDGET", 200000))
        self.seed = int(config.get("SEED", 42))

        a_grid = config.get("A_GRID", [0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 4])
        self.a_grid = [float(v) for v in a_grid]
        if len(self.a_grid) == 0 or any(v <= 0 for v in self.a_grid):
            raise ValueError(f"A_GRID must be non-empty and positive, was {self.a_grid}.")

        self.r_grid = [float(v) for v in config.get("R_GRID", [0.0, 0.25, 0.5, 0.75])]
        if any(not 0.0 <= v < 1.0 for v in self.r_grid):
            raise ValueError(f"R_GRID values must be in [0, 1), was {self.r_grid}.")

        self.kernel_rel_tol = float(config.get("KERNEL_REL_TOL", 1e-10))

        self.solid_estimator = config.get("SOLID_ESTIMATOR", "boundary")
        if self.solid_estimator not in SOLID_ESTIMATORS:
            raise ValueError(
                f"SOLID_ESTIMATOR must be boundary or mc, was {self.solid_estimator}."
            )

        trunc = config.get("TRUNC_RADIUS", "auto")
        self.trunc_radius = trunc if trunc == "auto" else float(trunc)
        if self.trunc_radius != "auto" and self.trunc_radius <= 0:
            raise ValueError(f"TRUNC_RADIUS must be auto or positive, was {trunc}.")

        self.tolerances = dict(DEFAULT_TOLERANCES)
        self.tolerances.update(config.get("TOLERANCES", None) or {})

        # Path to exported surfaces and reports.
        self.datapath = config.get("DATAPATH", self._get_appdata_dir())
        self.surfacespath = os.path.join(self.datapath, "surfaces")
        self.reportspath = os.path.join(self.datapath, "reports")

    def _get_appdata_dir(self):
        "Get user's appdata directory from platformdirs."
        dirs = PlatformDirs("perimflow", "perimflow")
        return dirs.user_data_dir

    @staticmethod
    def configdir():
        "Return the path to the configuration file directory."
        return os.path.dirname(os.path.realpath(__file__))

    @staticmethod
    def default_config_filename():
        "Return the path to the default configuration file."
        thisdir = AppConfig.configdir()
        return os.path.join(thisdir, "config.yml")
