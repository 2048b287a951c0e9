"""Self-verification suite: one check per headline guarantee of the library,
each returning a CheckResult with its tolerance and measured value.

The checks are consumed both by the ``verify`` CLI subcommand and by the
test suite, so the command-line report and pytest always agree.
"""

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .analysis import lyapunov_spectrum, power_spectrum, detect_peaks, strobe, min_pairwise_distance
from .closed_form import spinor_axis, spinor_params, spinor_theta
from .dynamics import integrate, integrate_rotation_matrix, rhs_gibbs, divergence_gibbs, trajectory_to_matrices
from .errors import GibbsOverflowError
from .omega_models import CallableOmega, ConstantOmega, ReversedOmega, RotatingPlaneOmega
from .rotation_core import AxisAngle, axis_angle_to_quaternion, gibbs_identity_residual, unit


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    tolerance: str
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: {self.measured}"
                f" (tolerance {self.tolerance}, {self.elapsed:.1f}s)")


def _timed(fn):
    def wrapper():
        t0 = time.perf_counter()
        res = fn()
        res.elapsed = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    return wrapper


_E0_DIAG = np.full(3, 1.0 / math.sqrt(3.0))


@lru_cache(maxsize=None)
def _run_rotating(period_key: str):
    # Shared long run: rotating omega, |E0| = 1 along the diagonal.
    period = {"40": 40.0, "pi": math.pi}[period_key]
    om = RotatingPlaneOmega.from_period(period)
    return integrate("euler", _E0_DIAG, om, 0.0, 4200.0, 0.01)


@lru_cache(maxsize=None)
def _spinor_reference():
    return spinor_params([1.0, 0.0, 0.0], math.pi / 2.0, [0.0, 0.0, 1.0])


def _spinor_run(dt):
    om = ConstantOmega([0.0, 0.0, 1.0])
    return integrate("euler", np.array([math.pi / 2.0, 0.0, 0.0]), om,
                     0.0, 4.0 * math.pi, dt)


def _spinor_terminal_error(dt):
    tr = _spinor_run(dt)
    sol = _spinor_reference()
    t = tr.times[-1]
    E_exact = spinor_axis(sol, t) * spinor_theta(sol, t)
    return float(np.abs(tr.states[-1] - E_exact).max())


@_timed
def check_spinor_oracle_match() -> CheckResult:
    """Constant-omega integration against the exact axis/angle solution."""
    start = time.perf_counter()
    tr = _spinor_run(1e-3)
    sol = _spinor_reference()
    E_exact = spinor_axis(sol, tr.times) * spinor_theta(sol, tr.times)[:, None]
    err = float(np.abs(tr.states - E_exact).max())
    elapsed = time.perf_counter() - start
    ok = err <= 1e-6 and elapsed < 5.0
    return CheckResult("spinor oracle match", ok,
                       f"max |E_num - E_exact| = {err:.3g}, {elapsed:.2f}s",
                       "1e-6, < 5 s")


@_timed
def check_spinor_sign_flip() -> CheckResult:
    """After one driving revolution the axis flips and the angle reflects:
    n(t + 2*pi) = -n(t), theta(t + 2*pi) = 2*pi - theta(t)."""
    dt = 2.0 * math.pi / 6300.0   # puts t and t + 2*pi on the same grid
    tr = _spinor_run(dt)
    sol = _spinor_reference()
    half = 6300
    worst = 0.0
    # closed form
    ts = tr.times[:half]
    n1, n2 = spinor_axis(sol, ts), spinor_axis(sol, ts + 2.0 * math.pi)
    th1, th2 = spinor_theta(sol, ts), spinor_theta(sol, ts + 2.0 * math.pi)
    worst = max(worst, float(np.abs(n2 + n1).max()),
                float(np.abs(th2 - (2.0 * math.pi - th1)).max()))
    # integrated
    th_num = np.linalg.norm(tr.states, axis=1)
    n_num = tr.states / th_num[:, None]
    worst = max(worst,
                float(np.abs(n_num[half:2 * half] + n_num[:half]).max()),
                float(np.abs(th_num[half:2 * half] - (2.0 * math.pi - th_num[:half])).max()))
    return CheckResult("spinor sign flip", worst <= 1e-6,
                       f"max deviation = {worst:.3g}", "1e-6")


@_timed
def check_example_values() -> CheckResult:
    """Reference inputs (n0 = x, theta0 = pi/2, omega = z) give a = 1/sqrt(2),
    b = 0, e1 = x, e2 = (y + z)/sqrt(2)."""
    sol = _spinor_reference()
    dev = max(abs(sol.a - 1.0 / math.sqrt(2.0)), abs(sol.b),
              float(np.abs(sol.e1 - np.array([1.0, 0.0, 0.0])).max()),
              float(np.abs(sol.e2 - np.array([0.0, 1.0, 1.0]) / math.sqrt(2.0)).max()))
    return CheckResult("closed-form reference values", dev <= 1e-12,
                       f"max deviation = {dev:.3g}", "1e-12")


@_timed
def check_cross_representation() -> CheckResult:
    """Euler-vector, quaternion and Gibbs integrations of the same rotation
    agree as matrices wherever theta stays in (0.1, pi - 0.1); the Gibbs run
    is compared on the stretch it completes before its theta = pi blowup."""
    om = RotatingPlaneOmega.from_period(40.0)
    dt = 1e-3
    tre = integrate("euler", _E0_DIAG, om, 0.0, 10.0, dt)
    q0 = axis_angle_to_quaternion(AxisAngle(unit(_E0_DIAG), 1.0))
    trq = integrate("quat", q0, om, 0.0, 10.0, dt)
    g0 = unit(_E0_DIAG) * math.tan(0.5)
    try:
        trg = integrate("gibbs", g0, om, 0.0, 10.0, dt)
    except GibbsOverflowError as exc:
        trg = exc.trajectory
    theta = np.linalg.norm(tre.states, axis=1)
    mask = (theta > 0.1) & (theta < math.pi - 0.1)
    Me, Mq = trajectory_to_matrices(tre), trajectory_to_matrices(trq)
    Mg = trajectory_to_matrices(trg)
    ng = len(trg)
    gmask = mask[:ng]
    def frob(A, B):
        return float(np.sqrt(((A - B) ** 2).sum(axis=(1, 2))).max())
    worst = max(frob(Me[mask], Mq[mask]),
                frob(Me[:ng][gmask], Mg[gmask]),
                frob(Mq[:ng][gmask], Mg[gmask]))
    return CheckResult("cross-representation agreement", worst <= 1e-6,
                       f"max pairwise Frobenius gap = {worst:.3g}", "1e-6")


@_timed
def check_matrix_oracle() -> CheckResult:
    """Quaternion integration against direct integration of dR/dt = [w]x R."""
    start = time.perf_counter()
    om = RotatingPlaneOmega.from_period(40.0)
    q0 = axis_angle_to_quaternion(AxisAngle(unit(_E0_DIAG), 1.0))
    trq = integrate("quat", q0, om, 0.0, 100.0, 1e-3)
    R0 = trajectory_to_matrices(trq)[0]
    _, Rs = integrate_rotation_matrix(R0, om, 0.0, 100.0, 1e-3)
    Mq = trajectory_to_matrices(trq)
    gap = float(np.sqrt(((Mq - Rs) ** 2).sum(axis=(1, 2))).max())
    elapsed = time.perf_counter() - start
    ok = gap <= 1e-6 and elapsed < 30.0
    return CheckResult("rotation-matrix oracle", ok,
                       f"max Frobenius gap = {gap:.3g}, {elapsed:.1f}s",
                       "1e-6, < 30 s")


@_timed
def check_rk4_order() -> CheckResult:
    """Halving dt shrinks the terminal error ~16x (4th-order convergence)."""
    e1, e2 = _spinor_terminal_error(0.1), _spinor_terminal_error(0.05)
    ratio = e1 / e2
    return CheckResult("RK4 convergence order", 14.0 <= ratio <= 18.0,
                       f"error ratio dt=0.1 vs 0.05 = {ratio:.2f}", "[14, 18]")


@_timed
def check_psd_peaks() -> CheckResult:
    """Spectral peaks of |E(t)| under the rotating drive: frequencies near
    0.068 and 0.0925 (40-period drive), periods near 3 and 53 (pi-period)."""
    start = time.perf_counter()
    ok = True
    parts = []

    tr = _run_rotating("40")
    spec = power_spectrum(np.linalg.norm(tr.states, axis=1), 0.01, window="none")
    peaks = detect_peaks(spec, prominence_db=10.0, max_peaks=2)
    freqs = sorted(f for f, _ in peaks)
    ok &= len(freqs) == 2 and abs(freqs[0] - 0.068) <= 0.005 and abs(freqs[1] - 0.0925) <= 0.005
    parts.append(f"T=40 peaks at {freqs[0]:.4f}, {freqs[1]:.4f}" if len(freqs) == 2
                 else f"T=40: {len(freqs)} peaks")

    tr2 = _run_rotating("pi")
    spec2 = power_spectrum(np.linalg.norm(tr2.states, axis=1), 0.01, window="none")
    peaks2 = detect_peaks(spec2, prominence_db=10.0, max_peaks=2)
    periods = sorted(1.0 / f for f, _ in peaks2 if f > 0)
    ok &= (len(periods) == 2 and abs(periods[0] - 3.0) <= 0.45
           and abs(periods[1] - 53.0) <= 7.95)
    parts.append(f"T=pi periods {periods[0]:.2f}, {periods[1]:.2f}" if len(periods) == 2
                 else f"T=pi: {len(periods)} peaks")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 240.0
    return CheckResult("power-spectrum reproduction", bool(ok),
                       "; ".join(parts) + f", {elapsed:.0f}s",
                       "0.068/0.0925 +-0.005; periods 3/53 +-15%; < 2 min each")


@_timed
def check_lyapunov() -> CheckResult:
    """Largest exponent of the driven rotation is ~0 (no chaos), and the
    estimator recovers the exponents of a known linear system."""
    om = RotatingPlaneOmega.from_period(40.0)
    q0 = axis_angle_to_quaternion(AxisAngle(unit(_E0_DIAG), 1.0))
    est = lyapunov_spectrum("quat", q0, om, 0.0, 1000.0, 0.01)
    lmax = float(np.abs(est.exponents).max())
    A = np.diag([0.1, -0.2])
    est2 = lyapunov_spectrum(lambda x, t: A @ x, [1.0, 1.0], None, 0.0, 100.0, 0.01)
    dev = float(np.abs(np.sort(est2.exponents)[::-1] - np.array([0.1, -0.2])).max())
    ok = lmax <= 1e-3 and dev <= 1e-4
    return CheckResult("Lyapunov exponents", ok,
                       f"|lambda_max| = {lmax:.2e}; linear self-test dev = {dev:.2e}",
                       "1e-3; self-test 1e-4")


@_timed
def check_boundary_passage() -> CheckResult:
    """Reversed-flow construction drives |E| through 2*pi: the angle passes
    the boundary monotonically, the axis stays continuous, and the angle
    then oscillates inside [2*pi, 4*pi]."""
    dt = 1e-3
    om = CallableOmega(lambda t: np.array([1.0, t, 0.0]),
                       {1: lambda t: np.array([0.0, 1.0, 0.0])})
    fwd = integrate("euler", np.zeros(3), om, 0.0, 1.0, dt)
    E1 = fwd.states[-1]
    th1 = float(np.linalg.norm(E1))
    n1 = E1 / th1
    omr = ReversedOmega(om, 1.0)
    rev = integrate("euler", -n1 * (2.0 * math.pi - th1), omr, 0.0, 30.0, dt)
    theta = np.linalg.norm(rev.states, axis=1)
    # monotone through the boundary: increasing on a window around t = 1
    near = (rev.times > 0.9) & (rev.times < 1.1)
    monotone = bool(np.all(np.diff(theta[near]) > 0))
    naxes = rev.states / theta[:, None]
    dn = float(np.linalg.norm(np.diff(naxes, axis=0), axis=1).max())
    wmax = max(float(np.linalg.norm(omr(t))) for t in rev.times[::100])
    after = theta[rev.times > 1.05]
    inside = bool(after.min() >= 2.0 * math.pi - 1e-9
                  and after.max() <= 4.0 * math.pi + 1e-9)
    ok = monotone and dn <= 2.0 * wmax * dt and inside
    return CheckResult("boundary passage", ok,
                       f"monotone={monotone}, max|dn|={dn:.2e} (bound {2*wmax*dt:.2e}), "
                       f"theta in [{after.min():.3f}, {after.max():.3f}]",
                       "monotone; |dn| <= 2 max|w| dt; theta in [2pi, 4pi]")


@_timed
def check_continuation_sign() -> CheckResult:
    """omega = (1 - t) z from the identity: the continued angle goes
    negative after the drive reverses, while the axis never moves."""
    om = CallableOmega(lambda t: np.array([0.0, 0.0, 1.0 - t]),
                       {1: lambda t: np.array([0.0, 0.0, -1.0])})
    from .rotation_core import UnitQuaternion
    from .dynamics import continue_axis_angle
    tr = integrate("quat", UnitQuaternion(1.0, np.zeros(3)), om, 0.0, 4.0, 1e-3)
    aa, rec = continue_axis_angle(tr)
    theta = aa.states[:, 3]
    expect = tr.times - tr.times ** 2 / 2.0
    dev = float(np.abs(theta - expect).max())
    axis_dev = float(np.abs(aa.states[:, :3] - np.array([0.0, 0.0, 1.0])).max())
    ok = dev <= 1e-9 and axis_dev == 0.0 and theta[-1] < 0.0
    return CheckResult("continuation sign rule", ok,
                       f"theta dev = {dev:.2e}, axis dev = {axis_dev:.2e}, "
                       f"theta(4) = {theta[-1]:.3f}", "n = z exactly; theta < 0 after t = 2")


@_timed
def check_gibbs_divergence() -> CheckResult:
    """Analytic divergence 2 w.G of the Gibbs field vs central differences."""
    rng = np.random.default_rng(7)
    worst = 0.0
    h = 1e-5
    for _ in range(1000):
        G = rng.uniform(-2.0, 2.0, 3)
        w = rng.uniform(-2.0, 2.0, 3)
        div = 0.0
        for c in range(3):
            e = np.zeros(3)
            e[c] = h
            div += (rhs_gibbs(G + e, w)[c] - rhs_gibbs(G - e, w)[c]) / (2.0 * h)
        worst = max(worst, abs(div - divergence_gibbs(G, w)))
    return CheckResult("Gibbs divergence", worst <= 1e-6,
                       f"max |FD - analytic| = {worst:.3g}", "1e-6")


@_timed
def check_gibbs_identity() -> CheckResult:
    """Four-vector identity residual, relative to the largest term."""
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        a, b, c, d = rng.uniform(-1.0, 1.0, (4, 3))
        res = float(np.linalg.norm(gibbs_identity_residual(a, b, c, d)))
        scale = max(
            float(np.linalg.norm(d * (a @ np.cross(b, c)))),
            float(np.linalg.norm(np.cross(b, c) * (a @ d))),
            float(np.linalg.norm(np.cross(c, a) * (b @ d))),
            float(np.linalg.norm(np.cross(a, b) * (c @ d))),
            1e-300,
        )
        worst = max(worst, res / scale)
    return CheckResult("Gibbs four-vector identity", worst <= 1e-11,
                       f"max relative residual = {worst:.3g}", "1e-11")


@_timed
def check_strobe() -> CheckResult:
    """Strobing the driven run at the drive period gives 106 points with no
    near-coincident pair (the orbit never closes)."""
    tr = _run_rotating("40")
    ss = strobe(tr, 40.0)
    gap = min_pairwise_distance(ss.states)
    ok = len(ss.times) == 106 and gap > 1e-4
    return CheckResult("strobe non-periodicity", ok,
                       f"{len(ss.times)} points, min pair distance = {gap:.3g}",
                       "106 points; all pairs > 1e-4")


@_timed
def check_quaternion_norm() -> CheckResult:
    """Cumulative pre-renormalization norm drift over 1e5 steps."""
    om = RotatingPlaneOmega.from_period(40.0)
    q0 = axis_angle_to_quaternion(AxisAngle(unit(_E0_DIAG), 1.0))
    tr = integrate("quat", q0, om, 0.0, 1000.0, 0.01)
    drift = tr.metadata["norm_drift_total"]
    return CheckResult("quaternion norm conservation", drift <= 1e-9,
                       f"cumulative drift over 1e5 steps = {drift:.3g}", "1e-9")


ALL_CHECKS = [
    check_spinor_oracle_match,
    check_spinor_sign_flip,
    check_example_values,
    check_cross_representation,
    check_matrix_oracle,
    check_rk4_order,
    check_psd_peaks,
    check_lyapunov,
    check_boundary_passage,
    check_continuation_sign,
    check_gibbs_divergence,
    check_gibbs_identity,
    check_strobe,
    check_quaternion_norm,
]


def run_all(max_workers: int | None = None) -> list[CheckResult]:
    """Run every check; ESL_THREADS (or max_workers) caps the worker pool."""
    if max_workers is None:
        max_workers = int(os.environ.get("ESL_THREADS", "1"))
    max_workers = max(1, max_workers)
    if max_workers == 1:
        return [fn() for fn in ALL_CHECKS]
    # warm the shared cached run once so workers don't duplicate it
    _run_rotating("40")
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda fn: fn(), ALL_CHECKS))
