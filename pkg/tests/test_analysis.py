import math

import numpy as np
import pytest

import eulerspin as es
from eulerspin.dynamics import Trajectory


def synthetic_trajectory(fn, t_end=10.0, dt=0.01, rep="euler"):
    ts = np.arange(0.0, t_end + dt / 2, dt)
    states = np.column_stack([fn(ts), np.zeros_like(ts), np.zeros_like(ts)])
    return Trajectory(rep, ts, states, dt)


# -- strobe ------------------------------------------------------------------

def test_strobe_constant_trajectory():
    tr = synthetic_trajectory(lambda t: np.ones_like(t))
    ss = es.strobe(tr, 1.0)
    assert len(ss.times) == 11
    assert np.all(ss.states[:, 0] == 1.0)


def test_strobe_periodic_trajectory_collapses():
    T = 2.5
    tr = synthetic_trajectory(lambda t: np.sin(2 * np.pi * t / T),
                              t_end=25.0, dt=0.001)
    ss = es.strobe(tr, T)
    spread = np.abs(ss.states - ss.states[0]).max()
    assert spread < 1e-9


def test_strobe_count_and_period_guard():
    tr = synthetic_trajectory(lambda t: t, t_end=4200.0, dt=0.01)
    ss = es.strobe(tr, 40.0)
    assert len(ss.times) == 106
    with pytest.raises(es.PeriodTooSmallError):
        es.strobe(tr, 0.015)


def test_strobe_offset():
    tr = synthetic_trajectory(lambda t: t, t_end=10.0, dt=0.01)
    ss = es.strobe(tr, 2.0, offset=0.5)
    assert np.allclose(ss.times, [0.5, 2.5, 4.5, 6.5, 8.5], atol=1e-12)
    assert np.allclose(ss.states[:, 0], ss.times, atol=1e-12)


# -- power spectrum ----------------------------------------------------------

def test_psd_pure_tone_peak_location_and_level():
    dt, n, f0 = 0.1, 4096, 0.1
    ts = np.arange(n) * dt
    # place the tone exactly on a bin so there is no leakage
    k = round(f0 * n * dt)
    f_bin = k / (n * dt)
    spec = es.power_spectrum(np.sin(2 * np.pi * f_bin * ts), dt, window="none")
    peak = int(np.argmax(spec.power))
    assert abs(spec.freqs[peak] - f0) <= 1.0 / (n * dt)
    assert abs(spec.power[peak] - 0.5) < 1e-12      # unit sinusoid: power 1/2
    assert abs(spec.power_db[peak]) < 1e-10         # and 0 dB by calibration


def test_psd_hann_keeps_tone_calibration():
    dt, n = 0.1, 4096
    ts = np.arange(n) * dt
    k = 410
    f_bin = k / (n * dt)
    spec = es.power_spectrum(np.sin(2 * np.pi * f_bin * ts), dt, window="hann")
    assert abs(spec.power_db.max()) < 0.01


def test_psd_parseval_no_window():
    rng = np.random.default_rng(12)
    x = rng.standard_normal(2048)
    spec = es.power_spectrum(x, 0.5, window="none")
    var = np.var(x - x.mean())
    assert math.isclose(spec.power.sum(), var, rel_tol=1e-9)


def test_psd_frequency_axis():
    spec = es.power_spectrum(np.sin(np.arange(256)), 0.25)
    assert spec.freqs[0] == 0.0
    assert math.isclose(spec.freqs[-1], 2.0)  # Nyquist = 1/(2 dt)
    assert np.allclose(np.diff(spec.freqs), spec.freqs[1], atol=1e-15)


def test_psd_too_short():
    with pytest.raises(es.SeriesTooShortError):
        es.power_spectrum(np.array([1.0, 2.0]), 0.1)


def test_detect_peaks_two_tones():
    dt, n = 0.1, 4096
    ts = np.arange(n) * dt
    f1, f2 = 100 / (n * dt), 300 / (n * dt)
    x = np.sin(2 * np.pi * f1 * ts) + 0.5 * np.sin(2 * np.pi * f2 * ts)
    spec = es.power_spectrum(x, dt, window="hann")
    peaks = es.detect_peaks(spec, prominence_db=10.0, max_peaks=2)
    got = sorted(f for f, _ in peaks)
    assert abs(got[0] - f1) <= 1.0 / (n * dt)
    assert abs(got[1] - f2) <= 1.0 / (n * dt)


def test_detect_peaks_flat_spectrum_empty():
    spec = es.Spectrum(np.linspace(0, 1, 100), np.ones(100))
    assert es.detect_peaks(spec, prominence_db=3.0) == []


# -- lyapunov ----------------------------------------------------------------

def test_lyapunov_linear_oracle():
    A = np.diag([0.1, -0.2])
    est = es.lyapunov_spectrum(lambda x, t: A @ x, [1.0, 1.0], None,
                               0.0, 100.0, 0.01)
    assert np.abs(np.sort(est.exponents)[::-1] - [0.1, -0.2]).max() < 1e-4
    assert est.history.shape[1] == 2
    assert len(est.renorm_times) == len(est.history)


def test_lyapunov_frozen_flow_zero():
    om = es.ConstantOmega([0.0, 0.0, 0.0])
    est = es.lyapunov_spectrum("euler", np.array([0.5, 0.2, 0.1]), om,
                               0.0, 10.0, 0.01)
    assert np.abs(est.exponents).max() < 1e-9


def test_lyapunov_sum_matches_divergence_on_gibbs():
    # sum of exponents ~ time-averaged divergence 2 w.G along the run
    om = es.ConstantOmega([0.05, 0.0, 0.02])
    g0 = np.array([0.1, 0.05, -0.1])
    t_end, dt = 50.0, 0.01
    est = es.lyapunov_spectrum("gibbs", g0, om, 0.0, t_end, dt)
    tr = es.integrate("gibbs", g0, om, 0.0, t_end, dt)
    divs = [es.divergence_gibbs(G, om(t)) for t, G in zip(tr.times, tr.states)]
    mean_div = float(np.mean(divs))
    assert abs(est.exponents.sum() - mean_div) <= 0.05 * abs(mean_div)


# -- recurrence --------------------------------------------------------------

def test_recurrence_symmetric_unit_diagonal():
    om = es.ConstantOmega([0.0, 0.0, 1.0])
    tr = es.integrate("euler", np.array([1.0, 0.0, 0.0]), om, 0.0, 5.0, 0.01)
    rm = es.recurrence(tr, 0.1, stride=5)
    M = rm.matrix
    assert np.array_equal(M, M.T)
    assert np.all(np.diag(M))


def test_recurrence_all_ones_for_huge_epsilon():
    tr = synthetic_trajectory(lambda t: np.sin(t), t_end=5.0, dt=0.1)
    rm = es.recurrence(tr, 1e6)
    assert np.all(rm.matrix)


def test_recurrence_sample_guard():
    tr = synthetic_trajectory(lambda t: t, t_end=100.0, dt=0.01)
    with pytest.raises(es.TooManySamplesError):
        es.recurrence(tr, 0.1, stride=1)
    rm = es.recurrence(tr, 0.1, stride=10)
    assert len(rm.times) <= 5000
