import math

import numpy as np
import pytest

import eulerspin as es


def test_constant_omega_and_derivatives():
    om = es.ConstantOmega([1.0, 2.0, 3.0])
    assert np.allclose(om(5.0), [1.0, 2.0, 3.0])
    for k in range(1, 5):
        assert np.allclose(om.derivative(0.3, k), 0.0)


def test_rotating_plane_period_and_values():
    om = es.RotatingPlaneOmega.from_period(40.0)
    assert math.isclose(om.period, 40.0)
    assert np.allclose(om(0.0), [1.0, 0.0, 0.0], atol=1e-15)
    assert np.allclose(om(10.0), [0.0, 1.0, 0.0], atol=1e-12)
    assert np.allclose(om(40.0), om(0.0), atol=1e-12)
    # unit magnitude for amplitude 1
    for t in np.linspace(0, 40, 17):
        assert math.isclose(np.linalg.norm(om(t)), 1.0, abs_tol=1e-15)


def test_rotating_plane_analytic_derivatives_match_fd():
    om = es.RotatingPlaneOmega.from_period(7.0)
    h = 1e-6
    for t in (0.3, 2.1):
        fd = (om(t + h) - om(t - h)) / (2 * h)
        assert np.allclose(om.derivative(t, 1), fd, atol=1e-8)


def test_pathological_omega_origin_and_domain():
    om = es.PathologicalOmega()
    assert np.allclose(om(0.0), 0.0)
    with pytest.raises(es.OmegaRangeError):
        om(-0.1)
    with pytest.raises(es.NotDifferentiableError):
        om.derivative(0.0, 1)
    # closed-form running integral
    t = 0.37
    assert np.allclose(om.integral(t),
                       t ** 3 * np.array([math.sin(1 / t), math.cos(1 / t), 0.0]),
                       atol=1e-15)
    assert np.allclose(es.integrated_omega(om, 0.0, t), om.integral(t), atol=1e-12)


def test_pathological_first_derivative_matches_fd():
    om = es.PathologicalOmega()
    t, h = 0.5, 1e-6
    fd = (om(t + h) - om(t - h)) / (2 * h)
    assert np.allclose(om.derivative(t, 1), fd, atol=1e-6)


def test_tabulated_round_trip(tmp_path):
    ts = np.linspace(0.0, 10.0, 101)
    vals = np.column_stack([np.sin(ts), np.cos(ts), ts * 0.1])
    path = tmp_path / "omega.csv"
    np.savetxt(path, np.column_stack([ts, vals]), delimiter=",",
               comments="", header="t,wx,wy,wz", fmt="%.17g")
    om = es.TabulatedOmega.from_csv(path)
    assert np.allclose(om(5.0), [math.sin(5.0), math.cos(5.0), 0.5], atol=1e-6)
    with pytest.raises(es.OmegaRangeError):
        om(10.5)
    with pytest.raises(es.OmegaRangeError):
        om(-0.5)


def test_tabulated_needs_increasing_times():
    with pytest.raises(ValueError):
        es.TabulatedOmega([0.0, 1.0, 1.0, 2.0], np.zeros((4, 3)))


def test_reversed_omega():
    om = es.CallableOmega(lambda t: np.array([1.0, t, 0.0]),
                          {1: lambda t: np.array([0.0, 1.0, 0.0])})
    rev = es.ReversedOmega(om, 1.0)
    assert np.allclose(rev(0.25), -om(0.75), atol=1e-15)
    # chain rule: d/dt [-w(t1 - t)] = +w'(t1 - t)
    assert np.allclose(rev.derivative(0.25, 1), om.derivative(0.75, 1), atol=1e-8)


def test_omega_derivatives_returns_orders_zero_through_max():
    om = es.RotatingPlaneOmega.from_period(40.0)
    ds = es.omega_derivatives(om, 1.0, 4)
    assert len(ds) == 5
    assert np.allclose(ds[0], om(1.0))


def test_arc_time_constant_and_rotating():
    om = es.ConstantOmega([0.0, 0.0, 2.0])
    assert math.isclose(es.arc_time(om, 0.0, 3.0), 6.0, rel_tol=1e-12)
    om2 = es.RotatingPlaneOmega.from_period(40.0, amplitude=1.5)
    assert math.isclose(es.arc_time(om2, 0.0, 4.0), 6.0, rel_tol=1e-9)


def test_integrated_omega_rotating_plane():
    om = es.RotatingPlaneOmega.from_period(40.0)
    from scipy.integrate import quad
    for c in range(3):
        ref = quad(lambda t, c=c: om(t)[c], 0.0, 7.0, epsabs=1e-12)[0]
        assert math.isclose(es.integrated_omega(om, 0.0, 7.0)[c], ref,
                            abs_tol=1e-9)
