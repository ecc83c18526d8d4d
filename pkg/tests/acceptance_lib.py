"""Shared inventory of the heavy simulation runs used by the acceptance suite.

Each named job produces a cached output directory under .acceptance_cache/ at
the repository root.  Jobs are populated on demand (ensure) or in bulk
(populate), and a per-job file lock makes concurrent population safe, so a
background prefill and a pytest session can overlap without duplicating work.
"""

import fcntl
import json
import os

from pairsim.config import parse_config
from pairsim.runner import execute

_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CACHE = os.path.join(_ROOT, ".acceptance_cache")


def _cfg(text):
    return parse_config(text, is_path=False)


def _fast_full(lam, alpha=0.0, phi="0.0"):
    return _cfg(f"""
[run]
mode = full
label = acc-fast-lam{lam}-a{alpha}

[pulse]
eps = 0.5
lambda = {lam}
tau = 45.0
omega = 0.7
alpha = {alpha}
phi = {phi}
""")


def _slow_full(lam, phi):
    return _cfg(f"""
[run]
mode = full
label = acc-slow-lam{lam}-phi{phi}

[pulse]
eps = 0.5
lambda = {lam}
tau = 25.0
omega = 0.1
alpha = 0.0
phi = {phi}

[grid]
lp = 8.0    ; the slow field accelerates pairs well past |p| = 4
""")


def _lda(lam):
    return _cfg(f"""
[run]
mode = lda
label = acc-lda-lam{lam}

[pulse]
eps = 0.5
lambda = {lam}
tau = 45.0
omega = 0.7
""")


def _conv_refined():
    # fast lambda = 10 run with N_x and N_p doubled and dt halved relative
    # to the defaults that the auto sizing picks (1024 x 256, dt = 0.125)
    return _cfg("""
[run]
mode = full
label = acc-conv-refined

[pulse]
eps = 0.5
lambda = 10.0
tau = 45.0
omega = 0.7

[grid]
nx = 2048
np = 512
lx = 625.0
lp = 4.0

[solver]
dt = 0.0625
""")


# declaration order doubles as the bulk population order: the cheap runs
# that unlock most criteria come first, the long ones last
JOBS = {
    "fast-lam10": lambda: _fast_full(10.0),
    "fast-lam10-chirp": lambda: _fast_full(10.0, alpha=0.5),
    "fast-lam2p5": lambda: _fast_full(2.5),
    "fast-lam2p5-chirp": lambda: _fast_full(2.5, alpha=0.5),
    "slow-lam10-phi0": lambda: _slow_full(10.0, "0.0"),
    "slow-lam10-phi90": lambda: _slow_full(10.0, "pi/2"),
    "lda-lam100": lambda: _lda(100.0),
    "fast-lam100": lambda: _fast_full(100.0),
    "lda-lam25": lambda: _lda(25.0),
    "lda-lam50": lambda: _lda(50.0),
    "fast-lam25": lambda: _fast_full(25.0),
    "fast-lam50": lambda: _fast_full(50.0),
    "slow-lam100-phi0": lambda: _slow_full(100.0, "0.0"),
    "slow-lam100-phi90": lambda: _slow_full(100.0, "pi/2"),
    "conv-refined": _conv_refined,
}


def job_dir(name):
    return os.path.join(CACHE, name)


def is_done(name):
    path = os.path.join(job_dir(name), "manifest.json")
    try:
        with open(path) as fh:
            return json.load(fh).get("status") == "ok"
    except (OSError, ValueError):
        return False


def ensure(name):
    """Run the named job unless a finished copy is already cached."""
    if name not in JOBS:
        raise KeyError(name)
    if is_done(name):
        return job_dir(name)
    os.makedirs(CACHE, exist_ok=True)
    with open(os.path.join(CACHE, name + ".lock"), "w") as lock:
        fcntl.flock(lock, fcntl.LOCK_EX)
        if not is_done(name):
            execute(JOBS[name](), job_dir(name))
    return job_dir(name)


def populate(names=None):
    for name in names or JOBS:
        done = is_done(name)
        print(f"[acceptance] {name}: {'cached' if done else 'running'}",
              flush=True)
        if not done:
            ensure(name)
            print(f"[acceptance] {name}: done", flush=True)


if __name__ == "__main__":
    import sys
    populate(sys.argv[1:] or None)
