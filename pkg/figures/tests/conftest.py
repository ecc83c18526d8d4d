"""Session fixtures: tiny simulator runs producing real CSV layouts.

The simulator is driven through its CLI in a subprocess, so the plotting
code under test touches nothing but the CSV files it is meant to consume.
"""

import subprocess
import sys

import pytest

_GRID = """
[grid]
nx = 64
np = 64
lx = 40.0
lp = 4.0

[solver]
t0_factor = -1.0
tf_factor = 1.0
dt = 0.5
"""

_FAST = """
[pulse]
eps = 0.5
lambda = 10.0
tau = 45.0
omega = 0.7
"""

_SLOW = """
[pulse]
eps = 0.5
lambda = 10.0
tau = 25.0
omega = 0.1
"""


def _run(tmp_path, name, command, config):
    cfg = tmp_path / f"{name}.cfg"
    cfg.write_text(config)
    out = tmp_path / name
    res = subprocess.run(
        [sys.executable, "-m", "pairsim.cli", command,
         "--config", str(cfg), "--out", str(out)],
        capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    return out


@pytest.fixture(scope="session")
def outputs(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("runs")
    runs = {}
    runs["sweep_lambda"] = _run(tmp, "sweep_lambda", "sweep",
                                "[run]\nmode = full\n" + _FAST + _GRID
                                + "\n[sweep]\nlambda = 2.5, 10.0, 100.0\n")
    runs["lda"] = _run(tmp, "lda", "lda",
                       "[run]\nmode = lda\n"
                       + _FAST.replace("lambda = 10.0", "lambda = 100.0")
                       + _GRID
                       + "\n[lda]\nspacing = 50.0\nextent = 100.0\n"
                         "nq = 41\ndt = 0.5\n")
    runs["sweep_b"] = _run(tmp, "sweep_b", "sweep",
                           "[run]\nmode = full\n" + _FAST + _GRID
                           + "\n[sweep]\nb = 0.0, 0.002, 0.004, 0.006\n")
    runs["sweep_lambda_b"] = _run(tmp, "sweep_lambda_b", "sweep",
                                  "[run]\nmode = full\n" + _FAST + _GRID
                                  + "\n[sweep]\nlambda = 2.5, 5.0\n"
                                    "b = 0.0, 0.006\n")
    runs["sweep_lambda_phi"] = _run(tmp, "sweep_lambda_phi", "sweep",
                                    "[run]\nmode = full\n" + _SLOW + _GRID
                                    + "\n[sweep]\nlambda = 2.5, 5.0\n"
                                      "phi = 0.0, pi/2\n")
    return runs
