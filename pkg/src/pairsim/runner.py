"""Run orchestration: single runs, sweeps, LDA composites, comparisons.

Every run produces a directory containing a ``manifest.json`` and a set of
two-column CSV files with ``#``-prefixed metadata headers.  All numeric CSV
content is formatted with ``%.17g`` so outputs are reproducible bit-exactly
regardless of worker count.
"""

from __future__ import annotations

import concurrent.futures
import json
import math
import os
import time

import numpy as np

from dataclasses import replace

from . import __version__
from .config import RunConfig, config_to_text
from .errors import IntegrationDivergedError, ValidationError
from .fields import (ChirpedGaussianPulse, effective_frequency,
                     homogeneous_slice, make_pulse)
from .grids import PhaseSpaceGrid, make_grid
from .homogeneous import evolve_modes
from .observables import (SpectrumResult, compare_spectra, default_lda_samples,
                          lda_spectrum, momentum_spectrum, pair_formation_length,
                          particle_density, position_distribution, total_charge,
                          total_yield)
from .solver import integrate, vacuum_state, write_snapshot

_FMT = "%.17g"


def _fmt(x) -> str:
    return _FMT % float(x)


def auto_grid(pulse: ChirpedGaussianPulse, t0: float, tf: float,
              lp: float = 4.0) -> PhaseSpaceGrid:
    """Default grid sizing: the half-width covers the envelope plus the
    light-cone spread of outgoing particles, at dx close to one."""
    half = 4.0 * pulse.lam + (tf - t0)
    nx = 8
    while 2.0 * half / nx > 1.25:
        nx *= 2
    np_ = 512 if pulse.lam >= 25.0 else 256
    return make_grid(nx, np_, half, lp)


def resolve_grid(cfg: RunConfig) -> PhaseSpaceGrid:
    if cfg.grid.explicit:
        return make_grid(cfg.grid.nx, cfg.grid.np_, cfg.grid.lx, cfg.grid.lp)
    t0 = cfg.solver.t0_factor * cfg.pulse.tau
    tf = cfg.solver.tf_factor * cfg.pulse.tau
    return auto_grid(cfg.pulse, t0, tf, cfg.grid.lp)


def resolve_dt(cfg: RunConfig, grid: PhaseSpaceGrid) -> float:
    if cfg.solver.dt is not None:
        if cfg.solver.dt <= 0:
            raise ValidationError(f"dt must be positive, got {cfg.solver.dt}")
        return cfg.solver.dt
    # 0.125 resolves the fastest vacuum oscillation 2*omega(p) at L_p = 4
    # to a fraction of a percent in the final yield; 0.25 does not.
    return min(0.25 * grid.dx, 0.125)


def write_csv(path, axis_name: str, value_name: str, axis, values, meta: dict):
    lines = []
    for key in meta:
        lines.append(f"# {key} = {meta[key]}")
    lines.append(f"{axis_name},{value_name}")
    for a, v in zip(np.asarray(axis).ravel(), np.asarray(values).ravel()):
        lines.append(f"{_fmt(a)},{_fmt(v)}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_table_csv(path, columns: list[str], rows, meta: dict):
    lines = [f"# {k} = {meta[k]}" for k in meta]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _spectrum_meta(sp: SpectrumResult, pulse: ChirpedGaussianPulse) -> dict:
    meta = {"kind": sp.kind, "normalization": _fmt(sp.normalization),
            "eps": _fmt(pulse.eps), "lambda": _fmt(pulse.lam),
            "tau": _fmt(pulse.tau), "omega": _fmt(pulse.omega),
            "b": _fmt(pulse.b), "phi": _fmt(pulse.phi)}
    for key, val in sp.provenance.items():
        meta[f"prov.{key}"] = val if isinstance(val, str) else _fmt(val)
    return meta


def _manifest(cfg: RunConfig, pulse: ChirpedGaussianPulse, extra: dict) -> dict:
    derived = {
        "alpha": pulse.alpha,
        "b": pulse.b,
        "omega_eff_at_minus_tau": effective_frequency(pulse, -pulse.tau),
        "omega_eff_at_plus_tau": effective_frequency(pulse, pulse.tau),
    }
    if pulse.eps > 0:
        length, ok = pair_formation_length(pulse)
        derived["pair_formation_length"] = length
        derived["lda_expected_valid"] = ok
    man = {
        "version": __version__,
        "mode": cfg.mode,
        "label": cfg.label,
        "pulse": {"eps": pulse.eps, "lambda": pulse.lam, "tau": pulse.tau,
                  "omega": pulse.omega, "alpha": pulse.alpha, "b": pulse.b,
                  "phi": pulse.phi},
        "derived": derived,
        "config_text": config_to_text(replace(cfg, pulse=pulse)),
    }
    man.update(extra)
    return man


def _write_manifest(out_dir, man: dict):
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(man, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def run_full(cfg: RunConfig, out_dir: str, pulse: ChirpedGaussianPulse | None = None) -> dict:
    """Integrate the transport equations for one pulse; write all artifacts.

    Returns a small result dict (yields, wall time) for sweep summaries.
    """
    pulse = pulse or cfg.pulse
    os.makedirs(out_dir, exist_ok=True)
    grid = resolve_grid(replace(cfg, pulse=pulse))
    t0 = cfg.solver.t0_factor * pulse.tau
    tf = cfg.solver.tf_factor * pulse.tau
    dt = resolve_dt(cfg, grid)

    snap_dir = os.path.join(out_dir, "snapshots")
    if cfg.snapshot_every > 0:
        os.makedirs(snap_dir, exist_ok=True)
    cadence = cfg.solver.record_every
    if cfg.snapshot_every > 0:
        cadence = math.gcd(cadence, cfg.snapshot_every)
    history = [(t0, 0.0, 0.0)]

    def observer(t, state):
        step = int(round((t - t0) / dt))
        n = particle_density(state)
        history.append((t, total_yield(n, grid), total_charge(state)))
        if cfg.snapshot_every > 0 and step % cfg.snapshot_every == 0:
            write_snapshot(os.path.join(snap_dir, f"snapshot_{step:06d}.bin"), state)

    start = time.perf_counter()
    state = vacuum_state(grid, t0)
    status, fail_time = "ok", None
    try:
        state = integrate(state, pulse, t0, tf, dt,
                          method=cfg.solver.method,
                          source_kmax=cfg.solver.source_kmax,
                          use_filter=cfg.solver.use_filter,
                          observer=observer, observe_every=cadence)
    except IntegrationDivergedError as exc:
        status, fail_time = "diverged", exc.time
    wall = time.perf_counter() - start

    result = {"status": status, "wall_time_s": wall}
    if status == "ok":
        n = particle_density(state)
        for reduced, suffix in ((False, ""), (True, "_reduced")):
            sp = momentum_spectrum(n, grid, reduced=reduced, lam=pulse.lam,
                                   provenance={"t": tf})
            write_csv(os.path.join(out_dir, f"momentum_spectrum{suffix}.csv"),
                      "p", "n", sp.axis, sp.values, _spectrum_meta(sp, pulse))
            sx = position_distribution(n, grid, reduced=reduced, lam=pulse.lam,
                                       provenance={"t": tf})
            write_csv(os.path.join(out_dir, f"position_distribution{suffix}.csv"),
                      "x", "n", sx.axis, sx.values, _spectrum_meta(sx, pulse))
        write_table_csv(os.path.join(out_dir, "yield_vs_time.csv"),
                        ["t", "N", "Q"], history,
                        {"kind": "yield-history", "eps": _fmt(pulse.eps),
                         "lambda": _fmt(pulse.lam), "dt": _fmt(dt)})
        result["N"] = total_yield(n, grid)
        result["N_reduced"] = total_yield(n, grid, reduced=True, lam=pulse.lam)
        result["Q"] = total_charge(state)

    man = _manifest(cfg, pulse, {
        "grid": {"nx": grid.nx, "np": grid.np_, "lx": grid.lx, "lp": grid.lp,
                 "dx": grid.dx, "dp": grid.dp},
        "solver": {"t0": t0, "tf": tf, "dt": dt, "method": cfg.solver.method,
                   "filter": cfg.solver.use_filter,
                   "source_kmax": cfg.solver.source_kmax},
        "result": {k: result[k] for k in result if k != "status"},
        "status": status,
        "failure_time": fail_time,
    })
    _write_manifest(out_dir, man)
    if status != "ok":
        raise IntegrationDivergedError(fail_time)
    return result


def run_homogeneous(cfg: RunConfig, out_dir: str) -> dict:
    """Spatially homogeneous benchmark run at a single effective strength."""
    os.makedirs(out_dir, exist_ok=True)
    h = cfg.homogeneous
    pulse = cfg.pulse
    eps_eff = pulse.eps if h.eps_eff is None else h.eps_eff
    slice_field = homogeneous_slice(pulse, eps_eff)
    t0 = cfg.solver.t0_factor * pulse.tau
    tf = cfg.solver.tf_factor * pulse.tau
    dt = h.dt if h.dt is not None else pulse.tau / 2000.0
    q = np.linspace(h.q_min, h.q_max, h.nq)

    start = time.perf_counter()
    n, p_f = evolve_modes(slice_field.field, q, t0, tf, dt)
    wall = time.perf_counter() - start

    write_csv(os.path.join(out_dir, "homogeneous_spectrum.csv"), "p", "n",
              p_f, n, {"kind": "homogeneous-momentum",
                       "eps_eff": _fmt(eps_eff), "tau": _fmt(pulse.tau),
                       "omega": _fmt(pulse.omega), "b": _fmt(pulse.b),
                       "phi": _fmt(pulse.phi), "t0": _fmt(t0), "tf": _fmt(tf),
                       "dt": _fmt(dt)})
    result = {"status": "ok", "wall_time_s": wall,
              "N_density": float(np.trapezoid(n, p_f)) / (2.0 * math.pi)}
    man = _manifest(cfg, pulse, {
        "homogeneous": {"eps_eff": eps_eff, "q_min": h.q_min, "q_max": h.q_max,
                        "nq": h.nq, "dt": dt, "t0": t0, "tf": tf},
        "result": {k: result[k] for k in result if k != "status"},
        "status": "ok", "failure_time": None,
    })
    _write_manifest(out_dir, man)
    return result


def run_lda(cfg: RunConfig, out_dir: str) -> dict:
    """Local-density composite spectrum from homogeneous slices."""
    os.makedirs(out_dir, exist_ok=True)
    pulse = cfg.pulse
    l = cfg.lda
    t0 = cfg.solver.t0_factor * pulse.tau
    tf = cfg.solver.tf_factor * pulse.tau
    dt = l.dt if l.dt is not None else pulse.tau / 2000.0
    x_samples = default_lda_samples(pulse, l.spacing, l.extent)
    q = np.linspace(l.q_min, l.q_max, l.nq)

    start = time.perf_counter()
    sp = lda_spectrum(pulse, x_samples, q, t0, tf, dt)
    wall = time.perf_counter() - start

    write_csv(os.path.join(out_dir, "lda_spectrum.csv"), "p", "n",
              sp.axis, sp.values, _spectrum_meta(sp, pulse))
    n_red = float(np.sum(sp.values)) * (q[1] - q[0])
    result = {"status": "ok", "wall_time_s": wall, "N_reduced": n_red}
    length, ok = pair_formation_length(pulse)
    man = _manifest(cfg, pulse, {
        "lda": {"samples": int(x_samples.size),
                "spacing": float(x_samples[1] - x_samples[0]),
                "q_min": l.q_min, "q_max": l.q_max, "nq": l.nq, "dt": dt,
                "pair_formation_length": length, "expected_valid": ok},
        "result": {k: result[k] for k in result if k != "status"},
        "status": "ok", "failure_time": None,
    })
    _write_manifest(out_dir, man)
    return result


def run_compare(cfg: RunConfig, out_dir: str) -> dict:
    """Full solver vs local-density composite on the same pulse."""
    os.makedirs(out_dir, exist_ok=True)
    full = run_full(cfg, os.path.join(out_dir, "full"))
    lda = run_lda(cfg, os.path.join(out_dir, "lda"))

    sp_full = read_spectrum_csv(os.path.join(out_dir, "full",
                                             "momentum_spectrum_reduced.csv"))
    sp_lda = read_spectrum_csv(os.path.join(out_dir, "lda", "lda_spectrum.csv"))
    metrics = compare_spectra(sp_full, sp_lda)
    man = _manifest(cfg, cfg.pulse, {
        "comparison": metrics,
        "result": {"N_reduced_full": full.get("N_reduced"),
                   "N_reduced_lda": lda.get("N_reduced")},
        "status": "ok", "failure_time": None,
    })
    _write_manifest(out_dir, man)
    return {"status": "ok", **metrics}


def _sweep_points(cfg: RunConfig) -> list[dict]:
    """Cartesian product of the sweep axes, in declared order."""
    points = [{}]
    for axis, values in cfg.sweep.items():
        points = [{**pt, axis: v} for pt in points for v in values]
    return points


def _pulse_for_point(pulse: ChirpedGaussianPulse, point: dict) -> ChirpedGaussianPulse:
    kw = dict(eps=pulse.eps, lam=pulse.lam, tau=pulse.tau, omega=pulse.omega,
              phi=pulse.phi)
    chirp = {"b": pulse.b}
    for axis, v in point.items():
        if axis == "lambda":
            kw["lam"] = v
        elif axis == "b":
            chirp = {"b": v}
        elif axis == "alpha":
            chirp = {"alpha": v}
        else:
            kw[axis] = v
    return make_pulse(kw.pop("eps"), kw.pop("lam"), kw.pop("tau"),
                      kw.pop("omega"), phi=kw.pop("phi"), **chirp)


def _point_dir_name(index: int, point: dict) -> str:
    parts = [f"point_{index:03d}"]
    for axis, v in point.items():
        parts.append(f"{axis}{_fmt(v)}")
    return "-".join(parts)


def _run_sweep_point(args):
    cfg, out_dir, index, point = args
    pulse = _pulse_for_point(cfg.pulse, point)
    sub = os.path.join(out_dir, _point_dir_name(index, point))
    try:
        res = run_full(cfg, sub, pulse)
    except IntegrationDivergedError as exc:
        # the sweep carries on; the summary row marks the failed point
        res = {"status": "diverged", "failure_time": exc.time}
    return index, point, res


def run_sweep(cfg: RunConfig, out_dir: str, threads: int = 1) -> dict:
    """Run the cartesian sweep; always assembled in point order, so the
    summary CSV is bit-identical for any worker count."""
    if not cfg.sweep:
        raise ValidationError("sweep mode needs a non-empty [sweep] section")
    os.makedirs(out_dir, exist_ok=True)
    points = _sweep_points(cfg)
    jobs = [(cfg, out_dir, i, pt) for i, pt in enumerate(points)]

    results = [None] * len(points)
    if threads <= 1 or len(points) == 1:
        for job in jobs:
            i, pt, res = _run_sweep_point(job)
            results[i] = (pt, res)
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            for i, pt, res in pool.map(_run_sweep_point, jobs):
                results[i] = (pt, res)

    axes = list(cfg.sweep)
    lines = [f"# kind = sweep-summary", f"# points = {len(points)}",
             f"# axes = {','.join(axes)}",
             ",".join(axes + ["N", "N_reduced", "Q", "status"])]
    n_failed = 0
    for pt, res in results:
        coords = [_fmt(pt[a]) for a in axes]
        if res["status"] == "ok":
            lines.append(",".join(coords + [_fmt(res["N"]), _fmt(res["N_reduced"]),
                                            _fmt(res["Q"]), "ok"]))
        else:
            n_failed += 1
            lines.append(",".join(coords + ["nan", "nan", "nan", res["status"]]))
    with open(os.path.join(out_dir, "sweep_summary.csv"), "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    man = _manifest(cfg, cfg.pulse, {
        "sweep": {"axes": axes, "points": len(points), "failed": n_failed,
                  "values": {a: cfg.sweep[a] for a in axes}},
        "status": "ok" if n_failed == 0 else "partial",
        "failure_time": None,
    })
    _write_manifest(out_dir, man)
    return {"status": man["status"], "points": len(points), "failed": n_failed}


def read_spectrum_csv(path) -> SpectrumResult:
    """Read back a two-column spectrum CSV written by this module."""
    meta = {}
    axis, values = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = val.strip()
                continue
            first = line.split(",")[0]
            try:
                float(first)
            except ValueError:
                continue      # header row
            a, v = line.split(",")
            axis.append(float(a))
            values.append(float(v))
    kind = meta.get("kind", "momentum")
    if kind not in ("momentum", "position", "reduced-momentum", "reduced-position",
                    "homogeneous-momentum"):
        raise ValidationError(f"unrecognized spectrum kind {kind!r} in {path}")
    if kind == "homogeneous-momentum":
        kind = "momentum"
    order = np.argsort(axis)
    return SpectrumResult(np.asarray(axis)[order], np.asarray(values)[order],
                          kind, float(meta.get("normalization", 1.0)), meta)


def execute(cfg: RunConfig, out_dir: str | None = None, threads: int = 1) -> dict:
    """Dispatch a config to the matching run function."""
    out = out_dir or cfg.out_dir
    if cfg.mode == "full":
        if cfg.sweep:
            return run_sweep(cfg, out, threads)
        return run_full(cfg, out)
    if cfg.mode == "homogeneous":
        return run_homogeneous(cfg, out)
    if cfg.mode == "lda":
        return run_lda(cfg, out)
    if cfg.mode == "compare":
        return run_compare(cfg, out)
    raise ValidationError(f"unknown mode {cfg.mode!r}")
