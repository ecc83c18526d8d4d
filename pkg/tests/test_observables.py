import math

import numpy as np
import pytest

from pairsim.errors import ValidationError
from pairsim.fields import make_pulse
from pairsim.grids import make_grid
from pairsim.observables import (SpectrumResult, compare_spectra,
                                 default_lda_samples, lda_spectrum,
                                 momentum_spectrum, pair_formation_length,
                                 particle_density, position_distribution,
                                 total_charge, total_yield)
from pairsim.solver import WignerState, one_particle_energy, vacuum_state


def test_particle_density_vacuum_zero():
    g = make_grid(16, 64, 10.0, 4.0)
    n = particle_density(vacuum_state(g))
    assert np.max(np.abs(n)) < 1e-15


def test_particle_density_single_cell():
    g = make_grid(16, 64, 10.0, 4.0)
    st = vacuum_state(g)
    s = st.s.copy()
    ix, ip = 3, 20
    s[ix, ip] += one_particle_energy(g.p[ip])    # s^v = omega / m there
    st2 = WignerState(s, st.v0, st.v, st.p, 0.0, g)
    n = particle_density(st2)
    assert n[ix, ip] == pytest.approx(1.0, rel=1e-12)
    n[ix, ip] = 0.0
    assert np.max(np.abs(n)) < 1e-14


def test_marginal_consistency():
    g = make_grid(16, 64, 10.0, 4.0)
    rng = np.random.default_rng(5)
    n = rng.random((16, 64))
    N = total_yield(n, g)
    sp = momentum_spectrum(n, g)
    sx = position_distribution(n, g)
    assert np.sum(sp.values) * g.dp == pytest.approx(N, rel=1e-12)
    assert np.sum(sx.values) * g.dx == pytest.approx(N, rel=1e-12)


def test_single_cell_marginals():
    g = make_grid(16, 64, 10.0, 4.0)
    n = np.zeros((16, 64))
    n[4, 10] = 1.0
    sp = momentum_spectrum(n, g)
    assert sp.values[10] == pytest.approx(g.dx)
    assert np.count_nonzero(sp.values) == 1


def test_reduced_scaling():
    g = make_grid(16, 64, 10.0, 4.0)
    rng = np.random.default_rng(6)
    n = rng.random((16, 64))
    lam = 10.0
    a = momentum_spectrum(n, g)
    b = momentum_spectrum(n, g, reduced=True, lam=lam)
    assert np.max(np.abs(a.values - lam * b.values)) < 1e-14
    assert b.kind == "reduced-momentum"
    assert b.normalization == lam
    assert total_yield(n, g) == pytest.approx(lam * total_yield(n, g, reduced=True, lam=lam))
    with pytest.raises(ValidationError):
        momentum_spectrum(n, g, reduced=True)


def test_total_charge_vacuum():
    g = make_grid(16, 64, 10.0, 4.0)
    assert total_charge(vacuum_state(g)) == 0.0


def test_pair_formation_length():
    p = make_pulse(0.5, 100.0, 45.0, 0.7, alpha=0.0)
    l, ok = pair_formation_length(p)
    assert l == 4.0 and ok
    p2 = make_pulse(0.5, 2.5, 45.0, 0.7, alpha=0.0)
    l2, ok2 = pair_formation_length(p2)
    assert l2 == 4.0 and not ok2
    with pytest.raises(ValidationError):
        pair_formation_length(make_pulse(0.0, 10.0, 45.0, 0.7, alpha=0.0))


def test_compare_spectra_trivials():
    axis = np.linspace(-2, 2, 41)
    vals = np.exp(-axis**2)
    a = SpectrumResult(axis, vals, "momentum", 1.0, {})
    same = compare_spectra(a, SpectrumResult(axis, vals.copy(), "momentum", 1.0, {}))
    assert same["L1_rel"] == 0.0 and same["Linf_rel"] == 0.0 and same["peak_shift"] == 0.0
    double = compare_spectra(a, SpectrumResult(axis, 2 * vals, "momentum", 1.0, {}))
    assert double["L1_rel"] == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        compare_spectra(a, SpectrumResult(axis, vals, "position", 1.0, {}))


def test_spectrum_result_validation():
    with pytest.raises(ValidationError):
        SpectrumResult(np.array([0.0, 0.0, 1.0]), np.zeros(3), "momentum", 1.0, {})
    with pytest.raises(ValidationError):
        SpectrumResult(np.array([0.0, 1.0]), np.array([0.0, np.nan]), "momentum", 1.0, {})
    with pytest.raises(ValidationError):
        SpectrumResult(np.array([0.0, 1.0]), np.zeros(2), "nonsense", 1.0, {})


def test_default_lda_samples():
    p = make_pulse(0.5, 10.0, 45.0, 0.7, alpha=0.0)
    xs = default_lda_samples(p)
    assert xs[0] == -xs[-1]
    d = np.diff(xs)
    assert np.allclose(d, 10.0 / 40.0)
    assert xs[-1] >= 4 * 10.0 - 0.3


def test_lda_spectrum_zero_field():
    p = make_pulse(0.0, 10.0, 5.0, 0.7, alpha=0.0)
    xs = default_lda_samples(p, spacing=1.0, extent=5.0)
    q = np.linspace(-2, 2, 21)
    sp = lda_spectrum(p, xs, q, -20.0, 20.0, 0.05)
    assert np.max(np.abs(sp.values)) < 1e-12
    assert sp.kind == "reduced-momentum"


def test_lda_spectrum_sample_density_converged():
    # short cheap pulse; doubling the x-sampling density changes little
    p = make_pulse(0.5, 5.0, 5.0, 0.7, alpha=0.0)
    q = np.linspace(-2.5, 2.5, 101)
    a = lda_spectrum(p, default_lda_samples(p, spacing=p.lam / 20), q, -25.0, 25.0, 0.01)
    b = lda_spectrum(p, default_lda_samples(p, spacing=p.lam / 40), q, -25.0, 25.0, 0.01)
    l1 = np.sum(np.abs(a.values - b.values)) / np.sum(np.abs(b.values))
    assert l1 < 0.005


def test_lda_spectrum_validation():
    p = make_pulse(0.5, 5.0, 5.0, 0.7, alpha=0.0)
    q = np.linspace(-1, 1, 11)
    with pytest.raises(ValidationError):
        lda_spectrum(p, np.array([]), q, -10.0, 10.0, 0.05)
    with pytest.raises(ValidationError):
        lda_spectrum(p, np.array([0.0, 1.0, 3.0]), q, -10.0, 10.0, 0.05)
