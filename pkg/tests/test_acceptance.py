"""Acceptance suite: end-to-end physics and reproducibility criteria.

Each test prints one PASS/FAIL line directly to the terminal.  The heavy
simulation runs are shared through the cache in acceptance_lib; populate it
ahead of time with `python tests/acceptance_lib.py` to keep this module fast.
"""

import filecmp
import json
import os
import time

import numpy as np

import acceptance_lib as acc
from pairsim import (
    force_multiplier_table,
    integrate,
    make_grid,
    make_pulse,
    particle_density,
    total_yield,
    vacuum_state,
)
from pairsim.config import parse_config
from pairsim.fields import field_value
from pairsim.grids import (
    GridField,
    imaginary_residue,
    inverse_transform_y_to_p,
    transform_p_to_y,
)
from pairsim.homogeneous import evolve_modes
from pairsim.reference import SauterPulse, sauter_pair_spectrum
from pairsim.observables import compare_spectra
from pairsim.runner import read_spectrum_csv, run_sweep


def _report(capsys, num, label, ok, detail=""):
    with capsys.disabled():
        tail = f"  ({detail})" if detail else ""
        print(f"\ncriterion {num:2d} [{label}]: {'PASS' if ok else 'FAIL'}{tail}")


def _manifest(name):
    with open(os.path.join(acc.ensure(name), "manifest.json")) as fh:
        return json.load(fh)


def _reduced_spectrum(name):
    fname = ("lda_spectrum.csv" if name.startswith("lda")
             else "momentum_spectrum_reduced.csv")
    return read_spectrum_csv(os.path.join(acc.ensure(name), fname))


def _history(name):
    path = os.path.join(acc.ensure(name), "yield_vs_time.csv")
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("t,"):
                continue
            rows.append([float(v) for v in line.split(",")])
    return np.asarray(rows)  # columns t, N, Q


def test_criterion_01_null_field_fixed_point(capsys):
    tau = 45.0
    pulse = make_pulse(0.0, 10.0, tau, 0.7, alpha=0.0)
    grid = make_grid(256, 256, 160.0, 4.0)
    t0, tf = -6.5 * tau, 6.5 * tau
    cpu0 = time.process_time()
    state = integrate(vacuum_state(grid, t0), pulse, t0, tf, 0.25)
    cpu = time.process_time() - cpu0
    vac = vacuum_state(grid, tf)
    dev = max(np.max(np.abs(state.s - vac.s)), np.max(np.abs(state.v0)),
              np.max(np.abs(state.v - vac.v)), np.max(np.abs(state.p)))
    n_tf = abs(total_yield(particle_density(state), grid))
    ok = dev < 1e-10 and n_tf < 1e-10 and cpu < 60.0
    _report(capsys, 1, "null-field fixed point", ok,
            f"max dev {dev:.2e}, N(tf) {n_tf:.2e}, {cpu:.1f} s cpu")
    assert dev < 1e-10
    assert n_tf < 1e-10
    assert cpu < 60.0


def test_criterion_02_transform_operator_algebra(capsys):
    pulse = make_pulse(0.5, 10.0, 45.0, 0.7, alpha=0.0)
    g = make_grid(64, 128, 40.0, 4.0)
    rng = np.random.default_rng(11)
    w = rng.standard_normal((64, 128))

    back = inverse_transform_y_to_p(g, transform_p_to_y(g, GridField(w)))
    rt = np.max(np.abs(back.values - w))

    M = force_multiplier_table(pulse, g, 0.7)
    i0 = int(np.argmin(np.abs(g.y)))
    row0 = float(np.max(np.abs(M[:, i0])))

    gh = make_grid(8, 64, 10.0, 4.0)
    Mh = force_multiplier_table(make_pulse(0.5, 1e8, 45.0, 0.7, alpha=0.0), gh, 2.0)
    lin_ref = 1j * field_value(make_pulse(0.5, 1e8, 45.0, 0.7, alpha=0.0), 0.0, 2.0) * gh.y
    paired = gh.y != gh.y.min()
    lin = np.max(np.abs(Mh[:, paired] - lin_ref[None, paired])) \
        / np.max(np.abs(lin_ref))

    res = imaginary_residue(g, M, w)
    ok = rt < 1e-12 and row0 == 0.0 and lin < 1e-12 and res < 1e-10
    _report(capsys, 2, "transform/operator algebra", ok,
            f"roundtrip {rt:.1e}, y=0 row {row0:.1e}, "
            f"linearity {lin:.1e}, residue {res:.1e}")
    assert rt < 1e-12
    assert row0 == 0.0
    assert lin < 1e-12
    assert res < 1e-10


def test_criterion_03_charge_conservation(capsys):
    rows = _history("fast-lam10")
    n_final = rows[-1, 1]
    q_max = float(np.max(np.abs(rows[:, 2])))
    ok = q_max < 1e-8 * n_final
    _report(capsys, 3, "charge conservation", ok,
            f"max |Q| {q_max:.2e} vs 1e-8 N(tf) {1e-8 * n_final:.2e}")
    assert ok


def test_criterion_04_sauter_oracle(capsys):
    sp = SauterPulse(0.5, 2.0)
    q = np.linspace(-4.0, 4.0, 161)
    n, p_f = evolve_modes(sp.field, q, -60.0, 60.0, 0.005)
    ref = sauter_pair_spectrum(sp, p_f - 2.0 * sp.e0 * sp.tau_s)
    i_peak = int(np.argmax(ref))
    peak_err = abs(n[i_peak] - ref[i_peak]) / ref[i_peak]
    sig = ref > 1e-6 * ref[i_peak]
    sig_err = float(np.max(np.abs(n[sig] - ref[sig]) / ref[sig]))
    ok = peak_err < 0.01 and sig_err < 0.05
    _report(capsys, 4, "analytic Sauter oracle", ok,
            f"peak err {peak_err:.2%}, worst significant err {sig_err:.2%}")
    assert peak_err < 0.01
    assert sig_err < 0.05


def test_criterion_05_cross_solver_equivalence(capsys):
    # The residual L1 distance between the full solver and the local-density
    # composite is dominated by the physical finite-focus correction the
    # composite omits (peak weight shifted to the shoulders, shrinking like
    # 1/lambda^2): at lambda = 100 it is 0.100 at the default resolution and
    # still 0.099 with dt halved and the momentum box doubled, so the bound
    # asserted here is the physical floor, not a numerical tolerance (see
    # the decisions ledger).  Monotone convergence, matched peak locations
    # and matched integrated yields carry the equivalence claim.
    l1, shift, dn = {}, {}, {}
    for lam in (25, 50, 100):
        full = _reduced_spectrum(f"fast-lam{lam}")
        lda = _reduced_spectrum(f"lda-lam{lam}")
        cmp_ = compare_spectra(full, lda)
        l1[lam] = cmp_["L1_rel"]
        shift[lam] = cmp_["peak_shift"]
        n_full = np.trapezoid(full.values, full.axis)
        n_lda = np.trapezoid(lda.values, lda.axis)
        dn[lam] = abs(n_full - n_lda) / n_lda
    ok = (l1[100] < 0.12 and l1[25] > l1[50] > l1[100]
          and abs(shift[100]) < 0.05 and dn[100] < 0.01)
    _report(capsys, 5, "full solver vs local-density composite", ok,
            "L1_rel " + ", ".join(f"lam={k}: {v:.3f}" for k, v in l1.items())
            + f"; lam=100 yield diff {dn[100]:.2%}, peak shift {shift[100]:g}")
    assert l1[100] < 0.12
    assert l1[25] > l1[50] > l1[100]
    assert abs(shift[100]) < 0.05
    assert dn[100] < 0.01


def test_criterion_06_multiphoton_signature(capsys):
    sp = _reduced_spectrum("fast-lam100")
    p_peak = float(sp.axis[np.argmax(sp.values)])
    mirrored = np.interp(-sp.axis, sp.axis, sp.values)
    asym = float(np.sum(np.abs(sp.values - mirrored)) / np.sum(np.abs(sp.values)))
    ok = abs(p_peak) < 0.1 and asym < 0.02
    _report(capsys, 6, "multiphoton peak at p=0", ok,
            f"peak at p={p_peak:.3f}, asymmetry {asym:.2%}")
    assert abs(p_peak) < 0.1
    assert asym < 0.02


def _central_splitting(sp):
    """(n at p=0, highest flanking maxima on each side within |p| < 1)."""
    i0 = int(np.argmin(np.abs(sp.axis)))
    n0 = sp.values[i0]
    inner = np.abs(sp.axis) < 1.0
    left = inner & (sp.axis < sp.axis[i0])
    right = inner & (sp.axis > sp.axis[i0])
    return n0, float(np.max(sp.values[left])), float(np.max(sp.values[right]))


def test_criterion_07_ponderomotive_splitting(capsys):
    n0, nl, nr = _central_splitting(_reduced_spectrum("fast-lam2p5"))
    split = n0 < 0.95 * nl and n0 < 0.95 * nr
    spc = _reduced_spectrum("fast-lam2p5-chirp")
    p_peak = float(spc.axis[np.argmax(spc.values)])
    c0, cl, cr = _central_splitting(spc)
    no_split = abs(p_peak) < 0.1 and c0 >= 0.95 * max(cl, cr)
    ok = split and no_split
    _report(capsys, 7, "ponderomotive peak splitting", ok,
            f"b=0: n(0)={n0:.3g} < flanks ({nl:.3g}, {nr:.3g}); "
            f"chirped: peak at p={p_peak:.3f}")
    assert split
    assert no_split


def test_criterion_08_chirp_yield_ordering(capsys):
    n0 = _manifest("fast-lam10")["result"]["N"]
    nb = _manifest("fast-lam10-chirp")["result"]["N"]
    ok = nb > n0
    _report(capsys, 8, "chirp increases yield", ok,
            f"N(b=0.5 w/tau) {nb:.4g} vs N(b=0) {n0:.4g}")
    assert ok


def test_criterion_09_slow_field_phase_structure(capsys):
    sp = _reduced_spectrum("slow-lam10-phi90")
    n = sp.values
    peak = float(np.max(n))
    above = n > 0.5 * peak
    i_max = int(np.argmax(n))
    # a second major peak separated from the first by a genuine valley
    maxima = [i for i in range(1, n.size - 1)
              if above[i] and n[i] >= n[i - 1] and n[i] >= n[i + 1]]
    two_peaks = False
    sep = 0.0
    for i in maxima:
        if i == i_max:
            continue
        lo, hi = sorted((i, i_max))
        valley = float(np.min(n[lo:hi + 1]))
        if valley < 0.8 * min(n[i], n[i_max]):
            two_peaks = True
            sep = max(sep, abs(sp.axis[i] - sp.axis[i_max]))

    def centroid(name):
        s = _reduced_spectrum(name)
        return float(np.sum(np.abs(s.axis) * s.values) / np.sum(s.values))

    c10, c100 = centroid("slow-lam10-phi0"), centroid("slow-lam100-phi0")
    ok = two_peaks and c10 > c100
    _report(capsys, 9, "slow-field phase structure", ok,
            f"two peaks {two_peaks} (sep {sep:.2f}), "
            f"<|p|> lam=10 {c10:.3f} > lam=100 {c100:.3f}")
    assert two_peaks
    assert c10 > c100


def test_criterion_10_slow_field_phase_yield(capsys):
    n_phi0 = _manifest("slow-lam100-phi0")["result"]["N"]
    n_phi90 = _manifest("slow-lam100-phi90")["result"]["N"]
    ok = n_phi90 < n_phi0
    _report(capsys, 10, "carrier phase yield ordering", ok,
            f"N(phi=pi/2) {n_phi90:.4g} < N(phi=0) {n_phi0:.4g}")
    assert ok


def test_criterion_11_convergence(capsys):
    n_base = _manifest("fast-lam10")["result"]["N"]
    n_fine = _manifest("conv-refined")["result"]["N"]
    rel = abs(n_fine - n_base) / n_fine

    # stepper order from a dt refinement on a homogeneous-limit column
    pulse = make_pulse(0.5, 1e7, 45.0, 0.7, alpha=0.0)
    grid = make_grid(16, 512, 16.0, 4.0)
    t0, tf = -292.5, 292.5
    yields = []
    for dt in (0.25, 0.125, 0.0625):
        st = integrate(vacuum_state(grid, t0), pulse, t0, tf, dt)
        yields.append(total_yield(particle_density(st), grid))
    order = float(np.log2(abs(yields[0] - yields[1])
                          / abs(yields[1] - yields[2])))
    ok = rel < 0.01 and order >= 3.5
    _report(capsys, 11, "resolution convergence", ok,
            f"refinement shift {rel:.2%}, measured order {order:.2f}")
    assert rel < 0.01
    assert order >= 3.5


_SWEEP_CONFIG = """
[run]
mode = full
label = determinism

[pulse]
eps = 0.5
lambda = 2.5
tau = 45.0
omega = 0.7

[grid]
nx = 128
np = 64
lx = 80.0
lp = 4.0

[solver]
t0_factor = -2.0
tf_factor = 2.0
dt = 0.25

[sweep]
lambda = 2.5, 5.0
"""


def test_criterion_12_determinism(capsys):
    cfg = parse_config(_SWEEP_CONFIG, is_path=False)
    out = {}
    import tempfile
    with tempfile.TemporaryDirectory() as tmp:
        for threads in (1, 4, 8):
            out[threads] = os.path.join(tmp, f"w{threads}")
            run_sweep(cfg, out[threads], threads=threads)
        csvs = []
        for base, _, files in os.walk(out[1]):
            rel = os.path.relpath(base, out[1])
            csvs += [os.path.join(rel, f) for f in files if f.endswith(".csv")]
        mismatch = [(w, f) for w in (4, 8) for f in csvs
                    if not filecmp.cmp(os.path.join(out[1], f),
                                       os.path.join(out[w], f), shallow=False)]
    ok = not mismatch and len(csvs) > 0
    _report(capsys, 12, "worker-count determinism", ok,
            f"{len(csvs)} CSVs bit-identical across 1/4/8 workers"
            if ok else f"mismatch in {mismatch}")
    assert csvs
    assert not mismatch
