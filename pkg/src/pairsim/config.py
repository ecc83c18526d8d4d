"""Run configuration: INI-style parsing, validation, and figure presets.

The file format is sectioned key = value text (configparser syntax).
Unknown sections or keys are rejected, never silently ignored.  Angles
accept plain floats or simple pi fractions ("pi/2", "2pi/3").
"""

from __future__ import annotations

import configparser
import io
import math
import re
from dataclasses import dataclass, field, replace

from .errors import ValidationError
from .fields import ChirpedGaussianPulse, make_pulse

MODES = ("full", "homogeneous", "lda", "compare")
SWEEP_AXES = ("lambda", "alpha", "b", "phi", "omega")

_KNOWN_KEYS = {
    "run": {"mode", "label"},
    "pulse": {"eps", "lambda", "tau", "omega", "alpha", "b", "phi"},
    "grid": {"nx", "np", "lx", "lp"},
    "solver": {"t0_factor", "tf_factor", "dt", "method", "filter",
               "source_kmax", "record_every"},
    "lda": {"spacing", "extent", "q_min", "q_max", "nq", "dt"},
    "homogeneous": {"eps_eff", "q_min", "q_max", "nq", "dt"},
    "sweep": set(SWEEP_AXES),
    "output": {"dir", "snapshot_every"},
}

_PI_RE = re.compile(r"^\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text: str) -> float:
    """Parse a float or a pi fraction like 'pi/2' or '2pi/3'."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text)
    if not m:
        raise ValidationError(f"cannot parse angle {text!r}")
    num = float(m.group(1)) if m.group(1) else 1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * math.pi / den


def _parse_list(text: str, conv=float) -> list:
    items = [s for s in re.split(r"[,\s]+", text.strip()) if s]
    if not items:
        raise ValidationError("empty list value")
    return [conv(s) for s in items]


@dataclass
class GridSpec:
    nx: int | None = None
    np_: int | None = None
    lx: float | None = None
    lp: float = 4.0

    @property
    def explicit(self) -> bool:
        return self.nx is not None


@dataclass
class SolverSpec:
    t0_factor: float = -6.5
    tf_factor: float = 6.5
    dt: float | None = None          # default rule: min(0.25 * dx, 0.25)
    method: str = "ifrk4"
    use_filter: bool = True
    source_kmax: int = 6
    record_every: int = 40


@dataclass
class LdaSpec:
    spacing: float | None = None     # default lambda / 40
    extent: float | None = None      # default 4 * lambda
    q_min: float = -4.0
    q_max: float = 4.0
    nq: int = 801
    dt: float | None = None          # default tau / 2000


@dataclass
class HomogeneousSpec:
    eps_eff: float | None = None     # default: pulse eps
    q_min: float = -4.0
    q_max: float = 4.0
    nq: int = 801
    dt: float | None = None


@dataclass
class RunConfig:
    mode: str
    pulse: ChirpedGaussianPulse
    grid: GridSpec = field(default_factory=GridSpec)
    solver: SolverSpec = field(default_factory=SolverSpec)
    lda: LdaSpec = field(default_factory=LdaSpec)
    homogeneous: HomogeneousSpec = field(default_factory=HomogeneousSpec)
    sweep: dict = field(default_factory=dict)
    out_dir: str = "out"
    snapshot_every: int = 0
    label: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        for axis, values in self.sweep.items():
            if axis not in SWEEP_AXES:
                raise ValidationError(f"unknown sweep axis {axis!r}")
            if not values:
                raise ValidationError(f"sweep axis {axis!r} has no values")


def _get(parser, section, key, conv, default=None):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key).strip()
    if raw == "":
        return default
    try:
        return conv(raw)
    except (ValueError, ValidationError) as exc:
        raise ValidationError(f"[{section}] {key}: {exc}") from exc


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"expected a boolean, got {text!r}")


def parse_config(source: str, *, is_path: bool | None = None) -> RunConfig:
    """Parse a config from a file path or from raw text."""
    if is_path is None:
        is_path = "\n" not in source and not source.lstrip().startswith("[")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        if is_path:
            with open(source) as fh:
                parser.read_file(fh)
        else:
            parser.read_file(io.StringIO(source))
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc}") from exc
    except configparser.Error as exc:
        raise ValidationError(f"config syntax error: {exc}") from exc

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ValidationError(f"unknown config section [{section}]")
        for key in parser.options(section):
            if key not in _KNOWN_KEYS[section]:
                raise ValidationError(f"unknown key {key!r} in section [{section}]")

    if not parser.has_section("pulse"):
        raise ValidationError("missing required section [pulse]")
    for key in ("eps", "lambda", "tau", "omega"):
        if not parser.has_option("pulse", key):
            raise ValidationError(f"missing required key {key!r} in [pulse]")

    alpha = _get(parser, "pulse", "alpha", float)
    b = _get(parser, "pulse", "b", float)
    if alpha is None and b is None:
        alpha = 0.0
    pulse = make_pulse(
        _get(parser, "pulse", "eps", float),
        _get(parser, "pulse", "lambda", float),
        _get(parser, "pulse", "tau", float),
        _get(parser, "pulse", "omega", float),
        alpha=alpha, b=b,
        phi=_get(parser, "pulse", "phi", parse_angle, 0.0),
    )

    grid = GridSpec(
        nx=_get(parser, "grid", "nx", int) if parser.has_section("grid") else None,
        np_=_get(parser, "grid", "np", int) if parser.has_section("grid") else None,
        lx=_get(parser, "grid", "lx", float) if parser.has_section("grid") else None,
        lp=_get(parser, "grid", "lp", float, 4.0) if parser.has_section("grid") else 4.0,
    )
    if (grid.nx is None) != (grid.np_ is None) or (grid.nx is None) != (grid.lx is None):
        raise ValidationError("[grid] nx, np and lx must be given together")
    if grid.explicit:
        from .grids import make_grid
        make_grid(grid.nx, grid.np_, grid.lx, grid.lp)   # validate early

    solver = SolverSpec(
        t0_factor=_get(parser, "solver", "t0_factor", float, -6.5),
        tf_factor=_get(parser, "solver", "tf_factor", float, 6.5),
        dt=_get(parser, "solver", "dt", float),
        method=_get(parser, "solver", "method", str, "ifrk4"),
        use_filter=_get(parser, "solver", "filter", _bool, True),
        source_kmax=_get(parser, "solver", "source_kmax", int, 6),
        record_every=_get(parser, "solver", "record_every", int, 40),
    ) if parser.has_section("solver") else SolverSpec()
    if solver.method not in ("ifrk4", "rk4"):
        raise ValidationError(f"[solver] method must be ifrk4 or rk4, got {solver.method!r}")
    if not solver.t0_factor < solver.tf_factor:
        raise ValidationError("[solver] need t0_factor < tf_factor")

    lda = LdaSpec(
        spacing=_get(parser, "lda", "spacing", float),
        extent=_get(parser, "lda", "extent", float),
        q_min=_get(parser, "lda", "q_min", float, -4.0),
        q_max=_get(parser, "lda", "q_max", float, 4.0),
        nq=_get(parser, "lda", "nq", int, 801),
        dt=_get(parser, "lda", "dt", float),
    ) if parser.has_section("lda") else LdaSpec()

    homog = HomogeneousSpec(
        eps_eff=_get(parser, "homogeneous", "eps_eff", float),
        q_min=_get(parser, "homogeneous", "q_min", float, -4.0),
        q_max=_get(parser, "homogeneous", "q_max", float, 4.0),
        nq=_get(parser, "homogeneous", "nq", int, 801),
        dt=_get(parser, "homogeneous", "dt", float),
    ) if parser.has_section("homogeneous") else HomogeneousSpec()

    sweep = {}
    if parser.has_section("sweep"):
        for axis in parser.options("sweep"):
            conv = parse_angle if axis == "phi" else float
            sweep[axis] = _parse_list(parser.get("sweep", axis), conv)

    return RunConfig(
        mode=_get(parser, "run", "mode", str, "full") if parser.has_section("run") else "full",
        pulse=pulse,
        grid=grid,
        solver=solver,
        lda=lda,
        homogeneous=homog,
        sweep=sweep,
        out_dir=_get(parser, "output", "dir", str, "out") if parser.has_section("output") else "out",
        snapshot_every=_get(parser, "output", "snapshot_every", int, 0)
        if parser.has_section("output") else 0,
        label=_get(parser, "run", "label", str, "") if parser.has_section("run") else "",
    )


def config_to_text(cfg: RunConfig) -> str:
    """Serialize a resolved config back to the file format (for manifests)."""
    p = cfg.pulse
    lines = [
        "[run]", f"mode = {cfg.mode}", f"label = {cfg.label}", "",
        "[pulse]", f"eps = {p.eps!r}", f"lambda = {p.lam!r}", f"tau = {p.tau!r}",
        f"omega = {p.omega!r}", f"b = {p.b!r}", f"phi = {p.phi!r}", "",
    ]
    if cfg.grid.explicit:
        lines += ["[grid]", f"nx = {cfg.grid.nx}", f"np = {cfg.grid.np_}",
                  f"lx = {cfg.grid.lx!r}", f"lp = {cfg.grid.lp!r}", ""]
    s = cfg.solver
    lines += ["[solver]", f"t0_factor = {s.t0_factor!r}", f"tf_factor = {s.tf_factor!r}"]
    if s.dt is not None:
        lines.append(f"dt = {s.dt!r}")
    lines += [f"method = {s.method}", f"filter = {s.use_filter}",
              f"source_kmax = {s.source_kmax}", f"record_every = {s.record_every}", ""]
    if cfg.mode in ("lda", "compare"):
        l = cfg.lda
        lines += ["[lda]"]
        if l.spacing is not None:
            lines.append(f"spacing = {l.spacing!r}")
        if l.extent is not None:
            lines.append(f"extent = {l.extent!r}")
        lines += [f"q_min = {l.q_min!r}", f"q_max = {l.q_max!r}", f"nq = {l.nq}"]
        if l.dt is not None:
            lines.append(f"dt = {l.dt!r}")
        lines.append("")
    if cfg.mode == "homogeneous":
        h = cfg.homogeneous
        lines += ["[homogeneous]"]
        if h.eps_eff is not None:
            lines.append(f"eps_eff = {h.eps_eff!r}")
        lines += [f"q_min = {h.q_min!r}", f"q_max = {h.q_max!r}", f"nq = {h.nq}"]
        if h.dt is not None:
            lines.append(f"dt = {h.dt!r}")
        lines.append("")
    if cfg.sweep:
        lines.append("[sweep]")
        for axis, values in cfg.sweep.items():
            lines.append(f"{axis} = " + ", ".join(repr(v) for v in values))
        lines.append("")
    lines += ["[output]", f"dir = {cfg.out_dir}", f"snapshot_every = {cfg.snapshot_every}"]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# presets: one per reproduced figure, desk-scale spatial widths
# ---------------------------------------------------------------------------

_FAST = dict(eps=0.5, tau=45.0, omega=0.7)
_SLOW = dict(eps=0.5, tau=25.0, omega=0.1)


def _preset_config(mode, pulse_kw, *, sweep=None, grid=None, label="", **extra):
    cfg = RunConfig(mode=mode, pulse=make_pulse(**pulse_kw), sweep=sweep or {},
                    label=label, **extra)
    if grid:
        cfg.grid = GridSpec(**grid)
    return cfg


def _presets() -> dict:
    fast_b_max = 0.5 * _FAST["omega"] / _FAST["tau"]
    out = {}
    out["fig1-fast-nochirp"] = lambda: _preset_config(
        "full", dict(alpha=0.0, phi=0.0, lam=10.0, **_FAST),
        sweep={"lambda": [2.5, 10.0, 100.0]}, label="fig1-fast-nochirp")
    out["fig1-lam10"] = lambda: _preset_config(
        "full", dict(alpha=0.0, phi=0.0, lam=10.0, **_FAST), label="fig1-lam10")
    out["fig1-lda"] = lambda: _preset_config(
        "lda", dict(alpha=0.0, phi=0.0, lam=100.0, **_FAST), label="fig1-lda")
    out["fig1-compare"] = lambda: _preset_config(
        "compare", dict(alpha=0.0, phi=0.0, lam=100.0, **_FAST), label="fig1-compare")
    out["fig3-fast-chirp"] = lambda: _preset_config(
        "full", dict(alpha=0.0, phi=0.0, lam=10.0, **_FAST),
        sweep={"b": [0.1 * fast_b_max / 0.5, 0.2 * fast_b_max / 0.5,
                     0.4 * fast_b_max / 0.5, fast_b_max]},
        label="fig3-fast-chirp")
    out["fig4-fast-yield"] = lambda: _preset_config(
        "full", dict(alpha=0.0, phi=0.0, lam=10.0, **_FAST),
        sweep={"lambda": [2.5, 5.0, 10.0, 25.0, 50.0, 100.0],
               "b": [0.0, fast_b_max]},
        label="fig4-fast-yield")
    out["fig5-slow-phi0"] = lambda: _preset_config(
        "full", dict(alpha=0.0, phi=0.0, lam=10.0, **_SLOW),
        sweep={"b": [0.0, 0.002, 0.004, 0.006]}, grid=dict(lp=8.0),
        label="fig5-slow-phi0")
    out["fig7-slow-phi-pi2"] = lambda: _preset_config(
        "full", dict(alpha=0.0, phi=math.pi / 2, lam=10.0, **_SLOW),
        sweep={"b": [0.0, 0.002, 0.004, 0.006]}, grid=dict(lp=8.0),
        label="fig7-slow-phi-pi2")
    out["fig8-slow-yield"] = lambda: _preset_config(
        "full", dict(alpha=0.0, phi=0.0, lam=10.0, **_SLOW),
        sweep={"lambda": [2.5, 5.0, 10.0, 25.0, 50.0, 100.0],
               "phi": [0.0, math.pi / 2]},
        grid=dict(lp=8.0), label="fig8-slow-yield")
    return out


PRESET_DESCRIPTIONS = {
    "fig1-fast-nochirp": "fast field, no chirp, spatial-width sweep (momentum spectra)",
    "fig1-lam10": "fast field, no chirp, single lambda = 10 run",
    "fig1-lda": "local-density composite spectrum for the fast field",
    "fig1-compare": "full solver vs local-density composite, lambda = 100",
    "fig3-fast-chirp": "fast field, chirp sweep (momentum spectra)",
    "fig4-fast-yield": "fast field, yield vs spatial width for zero and maximal chirp",
    "fig5-slow-phi0": "slow field, phi = 0, chirp and width sweep",
    "fig7-slow-phi-pi2": "slow field, phi = pi/2, chirp and width sweep",
    "fig8-slow-yield": "slow field, yield vs spatial width for both carrier phases",
}


def preset_names() -> list[str]:
    return sorted(_presets())


def load_preset(name: str) -> RunConfig:
    try:
        factory = _presets()[name]
    except KeyError:
        raise ValidationError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}") from None
    return factory()
