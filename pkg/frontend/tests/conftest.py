"""Session fixtures: every input CSV comes from the simulator's own CLI.

The plotting package is tested only against files produced by
``python3 -m dossim``, which keeps the CSV column contract as the single
interface between the two packages.
"""

from __future__ import annotations

import subprocess
import sys

import pytest

FLAT_CFG = """\
mode = flat
schedulers = dos, maxsnr, random
k = 3
n = 20
snr_db = 0:20:10
eta_i = 0.5
eta_tr = 0.3
trials = 64
seed = 9
interference_includes_snr = false
"""

ETA_CFG = """\
mode = flat
schedulers = dos-max
k = 3
n = 100
snr_db = 20
eta_i = 0.1:2.5:0.3
eta_tr = auto
epsilon = 0.5
trials = 256
seed = 2
interference_includes_snr = false
"""

GEO_CFG = """\
mode = geometric
schedulers = dos-max, maxsnr, mingi
k = 3
n = 10
tx_power_dbm = -20:10:5
eta_i = 0.3, 1, 3
eta_tr = auto
epsilon = 0.5
trials = 32
seed = 4
interference_includes_snr = true
cell_radius_m = 500
pl_exponent = 3
shadow_std_db = 8
noise_dbm = -104
"""

TABLE_CFG = """\
mode = flat
schedulers = dos-max
k = 2, 3
n = 20, 50
snr_db = 20
eta_i = 0.2:1.0:0.4
eta_tr = auto
epsilon = 0.5
trials = 64
seed = 3
interference_includes_snr = false
"""


def run_simulator(subcommand, config_text, out_path):
    cfg = out_path.with_suffix(".cfg")
    cfg.write_text(config_text, encoding="utf-8")
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "dossim",
            subcommand,
            "--config",
            str(cfg),
            "--out",
            str(out_path),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out_path


@pytest.fixture(scope="session")
def flat_csv(tmp_path_factory):
    """Flat sweep: 3 schedulers, one size, 3 SNR points, one threshold."""
    return run_simulator("sweep", FLAT_CFG, tmp_path_factory.mktemp("flat") / "flat.csv")


@pytest.fixture(scope="session")
def eta_csv(tmp_path_factory):
    """Threshold sweep at one SNR: 9 eta_I values for one (K, N)."""
    return run_simulator("sweep", ETA_CFG, tmp_path_factory.mktemp("eta") / "eta.csv")


@pytest.fixture(scope="session")
def geo_csv(tmp_path_factory):
    """Geometric power sweep with a 3-value candidate threshold grid."""
    return run_simulator("sweep", GEO_CFG, tmp_path_factory.mktemp("geo") / "geo.csv")


@pytest.fixture(scope="session")
def table_csv(tmp_path_factory):
    """Optimal-threshold table for a 2x2 grid of network sizes."""
    return run_simulator(
        "eta-table", TABLE_CFG, tmp_path_factory.mktemp("table") / "table.csv"
    )
