"""Trajectory diagnostics: stroboscopic sampling, Lyapunov exponents,
power spectra and recurrence matrices.

These operate on Trajectory objects (or bare sample arrays) and never
re-integrate; the Lyapunov estimator is the exception, since it advances
tangent vectors alongside a fresh RK4 run of the base system.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks
from scipy.spatial.distance import cdist

from .errors import (
    PeriodTooSmallError,
    SeriesTooShortError,
    TooManySamplesError,
)
from .dynamics import Trajectory, _rk4_step, _STEP_KERNELS
from .omega_models import OmegaModel

RECURRENCE_MAX_SAMPLES = 5000


@dataclass
class StrobeSeries:
    """States sampled at offset + k*period by linear interpolation."""

    period: float
    offset: float
    times: np.ndarray
    states: np.ndarray


@dataclass
class LyapunovEstimate:
    """Benettin-style exponent estimate with the per-renormalization log
    increments retained for convergence inspection."""

    exponents: np.ndarray
    history: np.ndarray  # (n_renorms, n_exponents) running estimates
    renorm_times: np.ndarray
    total_time: float


@dataclass
class Spectrum:
    freqs: np.ndarray
    power: np.ndarray          # linear power, sums to the signal variance
    window: str = "none"
    db_reference: float = 0.5  # unit sinusoid at a bin center reads 0 dB

    @property
    def power_db(self):
        return 10.0 * np.log10(np.maximum(self.power, 1e-300) / self.db_reference)


@dataclass
class RecurrenceMatrix:
    epsilon: float
    times: np.ndarray
    matrix: np.ndarray  # boolean (n, n)


# ---------------------------------------------------------------------------

def strobe(traj: Trajectory, period: float, offset: float = 0.0) -> StrobeSeries:
    """Sample a trajectory at offset + k*period, k = 0, 1, ...

    Values between grid points are linearly interpolated; the count is
    floor((t_end - first)/period) + 1.  Periods below 2*dt would alias the
    grid and are rejected.
    """
    if period < 2.0 * traj.dt:
        raise PeriodTooSmallError(
            f"strobe period {period!r} below twice the sample spacing {traj.dt!r}")
    t0, t_end = traj.times[0], traj.times[-1]
    first = t0 + offset
    if first > t_end:
        raise SeriesTooShortError("strobe offset beyond the end of the trajectory")
    count = int(math.floor((t_end - first) / period + 1e-9)) + 1
    ts = first + period * np.arange(count)
    states = np.column_stack([
        np.interp(ts, traj.times, traj.states[:, c])
        for c in range(traj.states.shape[1])
    ])
    return StrobeSeries(period, offset, ts, states)


def min_pairwise_distance(states: np.ndarray) -> float:
    """Smallest Euclidean distance between any two distinct rows."""
    d = cdist(states, states)
    np.fill_diagonal(d, np.inf)
    return float(d.min())


# ---------------------------------------------------------------------------

def _fd_jacobian(f, y, w, h=1e-6):
    dim = len(y)
    J = np.empty((dim, dim))
    for c in range(dim):
        yp = list(y)
        ym = list(y)
        yp[c] += h
        ym[c] -= h
        fp = f(*yp, *w)
        fm = f(*ym, *w)
        for r in range(dim):
            J[r, c] = (fp[r] - fm[r]) / (2.0 * h)
    return J


def lyapunov_spectrum(rep_or_rhs, state0, omega: OmegaModel | None,
                      t0: float, t_end: float, dt: float,
                      renorm_interval: int = 10,
                      n_exponents: int | None = None) -> LyapunovEstimate:
    """Lyapunov exponents by tangent-space evolution with QR renormalization.

    The base state advances with the usual RK4 step; the tangent block V
    advances with RK4 on dV/dt = J(y, t) V, the Jacobian taken by central
    finite differences at the step endpoints and midpoint.  Every
    renorm_interval steps V is QR-factored, the log diagonal accumulates,
    and the exponents are the accumulated sums over elapsed time.

    rep_or_rhs is a representation name, or a callable rhs(y, t) -> array
    for testing against systems with known exponents.  For the quaternion
    form the tangent space is restricted orthogonal to the state (the norm
    direction is neutral by construction), giving three exponents.
    """
    if callable(rep_or_rhs):
        user_rhs = rep_or_rhs
        y = tuple(float(v) for v in np.asarray(state0, dtype=float))
        dim = len(y)
        quat = False

        def jac(y, t):
            h = 1e-6
            J = np.empty((dim, dim))
            ya = np.array(y, dtype=float)
            for c in range(dim):
                e = np.zeros(dim)
                e[c] = h
                J[:, c] = (np.asarray(user_rhs(ya + e, t))
                           - np.asarray(user_rhs(ya - e, t))) / (2.0 * h)
            return J

        def step_base(y, t):
            ya = np.array(y, dtype=float)
            k1 = np.asarray(user_rhs(ya, t))
            k2 = np.asarray(user_rhs(ya + 0.5 * dt * k1, t + 0.5 * dt))
            k3 = np.asarray(user_rhs(ya + 0.5 * dt * k2, t + 0.5 * dt))
            k4 = np.asarray(user_rhs(ya + dt * k3, t + dt))
            return tuple(ya + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4))
    else:
        rep = rep_or_rhs
        fker = _STEP_KERNELS[rep]
        from .dynamics import _coerce_state
        y = _coerce_state(rep, state0)
        dim = len(y)
        quat = rep == "quat"

        def jac(y, t):
            return _fd_jacobian(fker, y, omega._eval3(t))

        def step_base(y, t):
            w1 = omega._eval3(t)
            w2 = omega._eval3(t + 0.5 * dt)
            w3 = omega._eval3(t + dt)
            return _rk4_step(fker, y, w1, w2, w3, dt)

    k = n_exponents or (dim - 1 if quat else dim)
    # Canonical-basis start: deterministic, and free of the slow log(cos)
    # alignment transient a random basis would add to finite-time estimates.
    V = np.eye(dim)[:, :k]
    if quat:
        q = np.array(y)
        V -= np.outer(q, q @ V)
        V = np.linalg.qr(V)[0]

    n_steps = int(math.floor((t_end - t0) / dt + 1e-9))
    sums = np.zeros(k)
    hist = []
    renorm_times = []
    for i in range(n_steps):
        t = t0 + i * dt
        y_next = step_base(y, t)
        ymid = tuple(0.5 * (a + b) for a, b in zip(y, y_next))
        J1 = jac(y, t)
        J2 = jac(ymid, t + 0.5 * dt)
        J3 = jac(y_next, t + dt)
        K1 = J1 @ V
        K2 = J2 @ (V + 0.5 * dt * K1)
        K3 = J2 @ (V + 0.5 * dt * K2)
        K4 = J3 @ (V + dt * K3)
        V = V + dt / 6.0 * (K1 + 2.0 * (K2 + K3) + K4)
        y = y_next
        if quat:
            norm = math.sqrt(sum(c * c for c in y))
            y = tuple(c / norm for c in y)
            q = np.array(y)
            V -= np.outer(q, q @ V)
        if (i + 1) % renorm_interval == 0 or i == n_steps - 1:
            Q, R = np.linalg.qr(V)
            V = Q * np.sign(np.diag(R))
            sums += np.log(np.abs(np.diag(R)))
            elapsed = (i + 1) * dt
            hist.append(sums / elapsed)
            renorm_times.append(t0 + elapsed)

    total = n_steps * dt
    return LyapunovEstimate(sums / total, np.array(hist),
                            np.array(renorm_times), total)


# ---------------------------------------------------------------------------

def power_spectrum(samples: np.ndarray, dt: float, window: str = "hann") -> Spectrum:
    """One-sided periodogram of a real series, mean removed first.

    Normalization: with no window the linear powers sum exactly to the
    signal variance, and a unit-amplitude sinusoid centered on a bin
    carries power 1/2 (0 dB against the 0.5 reference).  The Hann window
    uses coherent-gain normalization, preserving the sinusoid calibration.
    """
    x = np.asarray(samples, dtype=float)
    n = len(x)
    if n < 4:
        raise SeriesTooShortError(f"need at least 4 samples, got {n}")
    x = x - x.mean()
    if window == "hann":
        w = np.hanning(n)
    elif window == "none":
        w = np.ones(n)
    else:
        raise ValueError(f"unknown window {window!r}")
    X = np.fft.rfft(x * w)
    scale = (w.sum()) ** 2
    power = np.abs(X) ** 2 / scale
    power[1:] *= 2.0
    if n % 2 == 0:
        power[-1] /= 2.0
    freqs = np.fft.rfftfreq(n, d=dt)
    return Spectrum(freqs, power, window)


def detect_peaks(spec: Spectrum, prominence_db: float = 10.0,
                 max_peaks: int | None = None) -> list[tuple[float, float]]:
    """(frequency, power_db) of spectral peaks, strongest first."""
    db = spec.power_db
    idx, props = find_peaks(db, prominence=prominence_db)
    order = np.argsort(db[idx])[::-1]
    idx = idx[order]
    if max_peaks is not None:
        idx = idx[:max_peaks]
    return [(float(spec.freqs[i]), float(db[i])) for i in idx]


# ---------------------------------------------------------------------------

def recurrence(traj: Trajectory, epsilon: float, stride: int = 1) -> RecurrenceMatrix:
    """Thresholded pairwise-distance matrix on strided samples.

    R[i, j] is True when the Euclidean state distance is at most epsilon.
    Capped at 5000 retained samples (the matrix is dense)."""
    states = traj.states[::stride]
    times = traj.times[::stride]
    n = len(times)
    if n > RECURRENCE_MAX_SAMPLES:
        raise TooManySamplesError(
            f"{n} samples after stride {stride}; limit is {RECURRENCE_MAX_SAMPLES}")
    d = cdist(states, states)
    return RecurrenceMatrix(epsilon, times, d <= epsilon)
