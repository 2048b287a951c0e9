"""ODE right-hand sides for the five rotation-state forms, a fixed-step RK4
integrator, and the machinery that continues the rotation axis and angle
through multiples of 2*pi.

The integrator hot loops run on plain floats (scalar kernels) so that the
long experiment runs stay at desk-scale runtimes; the public rhs_* functions
wrap the same kernels, so there is a single source of truth per equation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundarySingularityError,
    GibbsOverflowError,
    ParityUndeterminedError,
)
from .omega_models import OmegaModel, omega_derivatives
from .rotation_core import (
    TWO_PI,
    AxisAngle,
    GeneralizedRep,
    UnitQuaternion,
)

EULER_GUARD = 1e-8          # guard band around |E| = 2*pi*k, k >= 1
AXIS_ANGLE_GUARD = 1e-8     # guard on |sin(theta/2)|
GIBBS_OVERFLOW = 1e6
_TAYLOR_SWITCH = 1e-2       # switchover for (1 - g(theta))/theta^2
_PARITY_TOL = 1e-6          # |omega^(j)| threshold for the parity search
_ZERO_CLASSIFY_TOL = 1e-6   # refined |M| minimum below this counts as a zero

STATE_COLUMNS = {
    "euler": ("ex", "ey", "ez"),
    "quat": ("m0", "mx", "my", "mz"),
    "gibbs": ("gx", "gy", "gz"),
    "axisangle": ("nx", "ny", "nz", "theta"),
}


@dataclass
class Trajectory:
    """Time-stamped state sequence in one representation on a uniform grid."""

    rep: str
    times: np.ndarray
    states: np.ndarray
    dt: float
    omega: OmegaModel | None = None
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    def column(self, name: str) -> np.ndarray:
        cols = STATE_COLUMNS[self.rep]
        if name == "t":
            return self.times
        return self.states[:, cols.index(name)]


@dataclass
class ContinuationRecord:
    """Bookkeeping for a continued axis/angle solution.

    ``l`` is the final branch index (theta in [2*pi*l, 2*pi*(l+1)]);
    ``zero_times`` the refined times where |M| = 0; ``parity_used`` the order
    of the first nonvanishing omega derivative at each zero; ``limit_axes``
    the axis limit assigned there.
    """

    l: int
    zero_times: list[float] = field(default_factory=list)
    parity_used: list[int] = field(default_factory=list)
    limit_axes: list[np.ndarray] = field(default_factory=list)
    boundary_values: list[float] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Scalar kernels
# ---------------------------------------------------------------------------

def _euler_coeff(theta: float) -> float:
    # (1 - g(theta))/theta^2 with g(theta) = (theta/2) cot(theta/2).
    # Below the switchover the closed form loses about half its digits to
    # cancellation, so a 3-term series takes over.
    if theta < _TAYLOR_SWITCH:
        t2 = theta * theta
        return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
    half = 0.5 * theta
    g = half * math.cos(half) / math.sin(half)
    return (1.0 - g) / (theta * theta)


def _check_euler_guard(theta: float):
    if theta > math.pi:
        k = round(theta / TWO_PI)
        if k >= 1 and abs(theta - TWO_PI * k) < EULER_GUARD:
            raise BoundarySingularityError(
                f"|E| = {theta!r} within guard band of 2*pi*{k}")


def _f_euler(ex, ey, ez, wx, wy, wz):
    theta = math.sqrt(ex * ex + ey * ey + ez * ez)
    _check_euler_guard(theta)
    c = _euler_coeff(theta)
    d = wx * ex + wy * ey + wz * ez
    t2 = theta * theta
    # The two factors of the middle term are never evaluated separately:
    # near a boundary one blows up while the bracket vanishes along
    # solutions, and only the combined product stays well-behaved.
    return (
        wx - (wx * t2 - ex * d) * c + 0.5 * (wy * ez - wz * ey),
        wy - (wy * t2 - ey * d) * c + 0.5 * (wz * ex - wx * ez),
        wz - (wz * t2 - ez * d) * c + 0.5 * (wx * ey - wy * ex),
    )


def _f_quat(m0, mx, my, mz, wx, wy, wz):
    return (
        -0.5 * (wx * mx + wy * my + wz * mz),
        0.5 * (wx * m0 + wy * mz - wz * my),
        0.5 * (wy * m0 + wz * mx - wx * mz),
        0.5 * (wz * m0 + wx * my - wy * mx),
    )


def _f_gibbs(gx, gy, gz, wx, wy, wz):
    d = wx * gx + wy * gy + wz * gz
    return (
        0.5 * (wx + gx * d + wy * gz - wz * gy),
        0.5 * (wy + gy * d + wz * gx - wx * gz),
        0.5 * (wz + gz * d + wx * gy - wy * gx),
    )


def _f_axis_angle(nx, ny, nz, theta, wx, wy, wz):
    s = math.sin(0.5 * theta)
    if abs(s) < AXIS_ANGLE_GUARD:
        raise BoundarySingularityError(
            f"sin(theta/2) = {s!r} inside axis/angle guard band")
    cot2 = 0.5 * math.cos(0.5 * theta) / s
    d = wx * nx + wy * ny + wz * nz
    return (
        (wx - nx * d) * cot2 + 0.5 * (wy * nz - wz * ny),
        (wy - ny * d) * cot2 + 0.5 * (wz * nx - wx * nz),
        (wz - nz * d) * cot2 + 0.5 * (wx * ny - wy * nx),
        d,
    )


# ---------------------------------------------------------------------------
# Public right-hand sides
# ---------------------------------------------------------------------------

def rhs_euler_vector(E, omega) -> np.ndarray:
    """dE/dt for the Euler-vector equation.

    omega - {omega |E|^2 - E (omega.E)} (1 - g(|E|))/|E|^2 + omega x E / 2,
    with g(theta) = (theta/2) cot(theta/2).  Undefined inside the guard band
    around |E| = 2*pi*k, k >= 1.
    """
    E = np.asarray(E, dtype=float)
    w = np.asarray(omega, dtype=float)
    return np.array(_f_euler(E[0], E[1], E[2], w[0], w[1], w[2]))


def rhs_quaternion(q: UnitQuaternion, omega) -> tuple[float, np.ndarray]:
    """(dm0, dm) for the quaternion form; conserves the norm analytically."""
    w = np.asarray(omega, dtype=float)
    d = _f_quat(q.m0, q.m[0], q.m[1], q.m[2], w[0], w[1], w[2])
    return d[0], np.array(d[1:])


def rhs_gibbs(G, omega) -> np.ndarray:
    """dG/dt = omega/2 + G (omega.G)/2 + omega x G / 2."""
    G = np.asarray(G, dtype=float)
    w = np.asarray(omega, dtype=float)
    return np.array(_f_gibbs(G[0], G[1], G[2], w[0], w[1], w[2]))


def rhs_axis_angle(n, theta: float, omega) -> tuple[np.ndarray, float]:
    """(dn, dtheta) for the joint axis/angle equations.

    dtheta = omega.n; dn = (omega - n(omega.n)) cot(theta/2)/2 + omega x n/2.
    dn is orthogonal to n.
    """
    n = np.asarray(n, dtype=float)
    w = np.asarray(omega, dtype=float)
    d = _f_axis_angle(n[0], n[1], n[2], theta, w[0], w[1], w[2])
    return np.array(d[:3]), d[3]


def rhs_generalized(F, omega, rep: GeneralizedRep, theta_hint: float) -> np.ndarray:
    """dF/dt for a generalized representation F = n*f(theta).

    omega f'(theta) - {omega f^2 - F (omega.F)} c(theta) + omega x F / 2,
    where c = (f'(theta) - f(theta) cot(theta/2)/2) / f(theta)^2.  Near
    theta = 0 the coefficient converges to
    {f'(0)/12 + f'''(0)/3} / f'(0)^2, which is used directly.
    """
    F = np.asarray(F, dtype=float)
    w = np.asarray(omega, dtype=float)
    theta = float(theta_hint)
    _check_euler_guard(abs(theta))
    if abs(theta) < 1e-4:
        c = (rep.f_prime_at_0 / 12.0 + rep.f_third_at_0 / 3.0) / rep.f_prime_at_0**2
        fp = rep.f_prime(theta)
    else:
        f = rep.f(theta)
        fp = rep.f_prime(theta)
        c = (fp - 0.5 * f / math.tan(0.5 * theta)) / (f * f)
    f2 = float(F @ F)
    d = float(w @ F)
    return w * fp - (w * f2 - F * d) * c + 0.5 * np.cross(w, F)


def divergence_gibbs(G, omega) -> float:
    """Divergence of the Gibbs vector field: 2 * omega . G."""
    G = np.asarray(G, dtype=float)
    w = np.asarray(omega, dtype=float)
    return 2.0 * float(w @ G)


# ---------------------------------------------------------------------------
# Fixed-step RK4 integration
# ---------------------------------------------------------------------------

_STEP_KERNELS = {"euler": _f_euler, "quat": _f_quat, "gibbs": _f_gibbs,
                 "axisangle": _f_axis_angle}


def _coerce_state(rep: str, state0) -> tuple[float, ...]:
    if rep == "quat" and isinstance(state0, UnitQuaternion):
        return (state0.m0, state0.m[0], state0.m[1], state0.m[2])
    if rep == "axisangle" and isinstance(state0, AxisAngle):
        return (state0.axis[0], state0.axis[1], state0.axis[2], state0.angle)
    a = np.asarray(state0, dtype=float)
    dim = len(STATE_COLUMNS[rep])
    if a.shape != (dim,):
        raise ValueError(f"{rep} state must have {dim} components")
    return tuple(float(x) for x in a)


def _rk4_step(f, y, w1, w2, w3, dt):
    # Classic RK4; omega sampled at t, t + dt/2 (shared by k2/k3), t + dt.
    k1 = f(*y, *w1)
    k2 = f(*(yi + 0.5 * dt * ki for yi, ki in zip(y, k1)), *w2)
    k3 = f(*(yi + 0.5 * dt * ki for yi, ki in zip(y, k2)), *w2)
    k4 = f(*(yi + dt * ki for yi, ki in zip(y, k3)), *w3)
    return tuple(
        yi + dt / 6.0 * (a + 2.0 * (b + c) + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    )


def _euler_detour_step(y, t, dt, omega: OmegaModel):
    """Advance one Euler-vector step through a 2*pi*k guard band.

    The step runs in quaternion form (regular there) and maps back by
    choosing, among the angles with cos(theta/2) = m0, the one nearest the
    incoming |E|; this keeps the continued angle and axis consistent with
    the boundary-continuation semantics.
    """
    theta_in = math.sqrt(y[0] ** 2 + y[1] ** 2 + y[2] ** 2)
    n_in = (y[0] / theta_in, y[1] / theta_in, y[2] / theta_in)
    s = math.sin(0.5 * theta_in)
    q = (math.cos(0.5 * theta_in), n_in[0] * s, n_in[1] * s, n_in[2] * s)
    w1 = omega._eval3(t)
    w2 = omega._eval3(t + 0.5 * dt)
    w3 = omega._eval3(t + dt)
    q = _rk4_step(_f_quat, q, w1, w2, w3, dt)
    qn = math.sqrt(sum(c * c for c in q))
    m0, mx, my, mz = (c / qn for c in q)
    mnorm = math.sqrt(mx * mx + my * my + mz * mz)
    theta_p = 2.0 * math.atan2(mnorm, m0)
    # Decide crossing vs. reflection by where the angle is headed: the
    # candidate angle closest to the slope-predicted value keeps theta
    # continuous and monotone through the boundary when omega.n != 0 there.
    thdot = w2[0] * n_in[0] + w2[1] * n_in[1] + w2[2] * n_in[2]
    theta_pred = theta_in + dt * thdot
    k = round(theta_in / TWO_PI)
    best = None
    for j in (k - 1, k, k + 1):
        for cand in (TWO_PI * j + theta_p, TWO_PI * j - theta_p):
            if cand > 0 and (best is None or abs(cand - theta_pred) < abs(best - theta_pred)):
                best = cand
    theta_out = best
    s_out = math.sin(0.5 * theta_out)
    if mnorm > 1e-12 and abs(s_out) > 1e-12:
        n_out = (mx / s_out, my / s_out, mz / s_out)
    else:
        n_out = n_in
    return (n_out[0] * theta_out, n_out[1] * theta_out, n_out[2] * theta_out)


def integrate(rep: str, state0, omega: OmegaModel, t0: float, t_end: float,
              dt: float) -> Trajectory:
    """Integrate one of the ODE forms with classic fixed-step RK4.

    rep is 'euler', 'quat', 'gibbs' or 'axisangle'.  Quaternion states are
    renormalized every step (the equation conserves the norm analytically,
    so this only removes rounding drift; the cumulative pre-renormalization
    drift is reported in metadata['norm_drift_total']).  Reruns with
    identical inputs are bit-identical.

    Raises BoundarySingularityError (axis/angle form) or GibbsOverflowError
    with the partial trajectory attached; the Euler-vector form steps
    through 2*pi*k guard bands via a quaternion detour instead of aborting.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if rep not in _STEP_KERNELS:
        raise ValueError(f"unknown representation {rep!r}")
    f = _STEP_KERNELS[rep]
    y = _coerce_state(rep, state0)
    dim = len(y)
    n_steps = int(math.floor((t_end - t0) / dt + 1e-9))
    times = t0 + dt * np.arange(n_steps + 1)
    states = np.empty((n_steps + 1, dim))
    states[0] = y
    meta: dict = {"t0": t0, "t_end": t_end}
    drift = 0.0
    boundary_events = []

    for i in range(n_steps):
        t = t0 + i * dt
        w1 = omega._eval3(t)
        w2 = omega._eval3(t + 0.5 * dt)
        w3 = omega._eval3(t + dt)
        try:
            y = _rk4_step(f, y, w1, w2, w3, dt)
        except BoundarySingularityError as exc:
            if rep == "euler":
                y = _euler_detour_step(states[i], t, dt, omega)
                boundary_events.append(t)
            else:
                part = Trajectory(rep, times[: i + 1], states[: i + 1].copy(),
                                  dt, omega, dict(meta, abort_time=t))
                exc.trajectory = part
                exc.abort_time = t
                raise
        if rep == "quat":
            norm = math.sqrt(sum(c * c for c in y))
            drift += abs(norm - 1.0)
            y = tuple(c / norm for c in y)
        elif rep == "gibbs":
            if math.sqrt(y[0] ** 2 + y[1] ** 2 + y[2] ** 2) > GIBBS_OVERFLOW:
                part = Trajectory(rep, times[: i + 2], np.vstack([states[: i + 1], y]),
                                  dt, omega, dict(meta, abort_time=t + dt))
                raise GibbsOverflowError(
                    f"|G| exceeded {GIBBS_OVERFLOW:g} at t = {t + dt}",
                    trajectory=part, abort_time=t + dt)
        states[i + 1] = y

    if rep == "quat":
        meta["norm_drift_total"] = drift
    if boundary_events:
        meta["boundary_detours"] = boundary_events
    return Trajectory(rep, times, states, dt, omega, meta)


def skew(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    return np.array([
        [0.0, -w[2], w[1]],
        [w[2], 0.0, -w[0]],
        [-w[1], w[0], 0.0],
    ])


def integrate_rotation_matrix(R0, omega: OmegaModel, t0: float, t_end: float,
                              dt: float) -> tuple[np.ndarray, np.ndarray]:
    """RK4 on the matrix ODE dR/dt = [omega]x R (frame-column oracle)."""
    R = np.asarray(R0, dtype=float).copy()
    n_steps = int(math.floor((t_end - t0) / dt + 1e-9))
    times = t0 + dt * np.arange(n_steps + 1)
    out = np.empty((n_steps + 1, 3, 3))
    out[0] = R
    for i in range(n_steps):
        t = t0 + i * dt
        w1 = skew(omega(t))
        w2 = skew(omega(t + 0.5 * dt))
        w3 = skew(omega(t + dt))
        k1 = w1 @ R
        k2 = w2 @ (R + 0.5 * dt * k1)
        k3 = w2 @ (R + 0.5 * dt * k2)
        k4 = w3 @ (R + dt * k3)
        R = R + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)
        out[i + 1] = R
    return times, out


def quaternion_state_to_matrix(m0, m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return ((m0 * m0 - float(m @ m)) * np.eye(3)
            + 2.0 * np.outer(m, m) + 2.0 * m0 * skew(m))


def trajectory_to_matrices(traj: Trajectory) -> np.ndarray:
    """Rotation matrix at every sample of a trajectory, any representation."""
    n = len(traj)
    out = np.empty((n, 3, 3))
    if traj.rep == "quat":
        for i in range(n):
            out[i] = quaternion_state_to_matrix(traj.states[i, 0], traj.states[i, 1:])
        return out
    for i in range(n):
        if traj.rep == "euler":
            e = traj.states[i]
            theta = float(np.linalg.norm(e))
            m0 = math.cos(0.5 * theta)
            m = e / theta * math.sin(0.5 * theta) if theta > 0 else np.zeros(3)
        elif traj.rep == "gibbs":
            g = traj.states[i]
            t = float(np.linalg.norm(g))
            theta = 2.0 * math.atan(t)
            m0 = math.cos(0.5 * theta)
            m = g / t * math.sin(0.5 * theta) if t > 0 else np.zeros(3)
        else:  # axisangle
            nvec, theta = traj.states[i, :3], traj.states[i, 3]
            m0 = math.cos(0.5 * theta)
            m = nvec * math.sin(0.5 * theta)
        out[i] = quaternion_state_to_matrix(m0, m)
    return out


# ---------------------------------------------------------------------------
# CSV round-trip
# ---------------------------------------------------------------------------

def save_trajectory_csv(traj: Trajectory, path):
    """Write a trajectory as CSV: a 't' column plus the state columns for
    its representation, with 17 significant digits (lossless for float64)."""
    cols = STATE_COLUMNS[traj.rep]
    header = "t," + ",".join(cols)
    data = np.column_stack([traj.times, traj.states])
    np.savetxt(path, data, delimiter=",", header=header, comments="",
               fmt="%.17g")


def load_trajectory_csv(path) -> Trajectory:
    """Read a trajectory CSV; the representation is inferred from the header."""
    from .errors import SchemaError

    with open(path) as fh:
        header = fh.readline().strip()
    names = tuple(header.split(","))
    if not names or names[0] != "t":
        raise SchemaError(f"{path}: first column must be 't', got {header!r}")
    rep = None
    for key, cols in STATE_COLUMNS.items():
        if names[1:] == cols:
            rep = key
            break
    if rep is None:
        raise SchemaError(f"{path}: unrecognized state columns {names[1:]!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != len(names):
        raise SchemaError(f"{path}: row width does not match header")
    times = data[:, 0]
    dt = float(times[1] - times[0]) if len(times) > 1 else 0.0
    return Trajectory(rep, times, data[:, 1:], dt)


# ---------------------------------------------------------------------------
# Continuation of axis and angle through 2*pi boundaries
# ---------------------------------------------------------------------------

def _refine_zero(times, mn2, j):
    """Vertex of the parabola through (t_{j-1}, t_j, t_{j+1}) on |M|^2."""
    y0, y1, y2 = mn2[j - 1], mn2[j], mn2[j + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom <= 0.0:
        return times[j], math.sqrt(max(y1, 0.0))
    dt = times[j] - times[j - 1]
    t1 = times[j] + 0.5 * dt * (y0 - y2) / denom
    ymin = y1 - (y0 - y2) ** 2 / (8.0 * denom)
    return t1, math.sqrt(max(ymin, 0.0))


def _first_nonvanishing_order(omega: OmegaModel, t1: float) -> tuple[int, np.ndarray]:
    for order, d in enumerate(omega_derivatives(omega, t1, 4)):
        if float(np.linalg.norm(d)) > _PARITY_TOL:
            return order, d
    raise ParityUndeterminedError(
        f"all omega derivatives through order 4 vanish at t = {t1}")


def _theta_from_principal(theta_p, l, orient):
    if orient > 0:
        return TWO_PI * l + theta_p
    return TWO_PI * (l + 1) - theta_p


def continue_axis_angle(qtraj: Trajectory,
                        omega: OmegaModel | None = None,
                        initial_branch: int = 0,
                        ) -> tuple[Trajectory, ContinuationRecord]:
    """Globally continuous (n(t), theta(t)) from a quaternion trajectory.

    Between zeros of |M| the angle is the branch-lifted principal value
    (theta in [2*pi*l, 2*pi*(l+1)]) and n = M/sin(theta/2).  At each zero,
    the parity of the first nonvanishing omega derivative decides whether
    theta crosses into the neighboring interval (even order) or reflects
    off the boundary (odd order), and n is assigned its two-sided limit.
    """
    if qtraj.rep != "quat":
        raise ValueError("continue_axis_angle needs a quaternion trajectory")
    if omega is None:
        omega = qtraj.omega
    if omega is None:
        raise ValueError("an omega model is required for parity detection")

    times = qtraj.times
    dt = qtraj.dt
    m0s = qtraj.states[:, 0]
    M = qtraj.states[:, 1:]
    mn = np.linalg.norm(M, axis=1)
    mn2 = mn * mn
    npts = len(times)

    # Candidate zeros: interior local minima of |M| below a grid-aware bound.
    zeros = []  # (index, refined t1, refined minimum)
    for j in range(1, npts - 1):
        if mn[j] <= mn[j - 1] and mn[j] <= mn[j + 1]:
            wmag = float(np.linalg.norm(omega(times[j])))
            if mn[j] < max(1e-6, 2.0 * wmag * dt):
                t1, mmin = _refine_zero(times, mn2, j)
                if mmin < _ZERO_CLASSIFY_TOL:
                    zeros.append((j, t1, mmin))

    record = ContinuationRecord(l=initial_branch)
    l = initial_branch
    orient = 1
    theta_out = np.empty(npts)
    n_out = np.empty((npts, 3))
    start_zero = mn[0] < 1e-9

    zi = 0
    pending = zeros[zi] if zeros else None
    sign_l = 1.0 if l % 2 == 0 else -1.0
    for j in range(npts):
        # Handle a zero crossing located between the previous and this sample.
        if pending is not None and times[j] > pending[1]:
            _, t1, _ = pending
            order, d = _first_nonvanishing_order(omega, t1)
            m0_t1 = 1.0 if float(np.interp(t1, times, m0s)) >= 0.0 else -1.0
            limit_axis = d / np.linalg.norm(d) * m0_t1 * (-1.0) ** (l + order + 1)
            theta_before = theta_out[j - 1] if j > 0 else TWO_PI * l
            b = round(theta_before / TWO_PI)
            boundary = TWO_PI * b
            if order % 2 == 0:
                l = l + 1 if b == l + 1 else l - 1
            theta_p_next = 2.0 * math.atan2(mn[j], m0s[j])
            cand_plus = _theta_from_principal(theta_p_next, l, +1)
            cand_minus = _theta_from_principal(theta_p_next, l, -1)
            orient = 1 if abs(cand_plus - boundary) <= abs(cand_minus - boundary) else -1
            sign_l = 1.0 if l % 2 == 0 else -1.0
            record.zero_times.append(t1)
            record.parity_used.append(order)
            record.limit_axes.append(limit_axis)
            record.boundary_values.append(boundary)
            zi += 1
            pending = zeros[zi] if zi < len(zeros) else None

        theta_p = 2.0 * math.atan2(mn[j], m0s[j])
        theta_out[j] = _theta_from_principal(theta_p, l, orient)
        if mn[j] > 1e-12:
            n_out[j] = M[j] / mn[j] * sign_l
        elif record.limit_axes:
            n_out[j] = record.limit_axes[-1]
        else:
            n_out[j] = np.full(3, np.nan)  # patched below for a start at a zero

    if start_zero:
        order, d = _first_nonvanishing_order(omega, times[0])
        m0_sign = 1.0 if m0s[0] >= 0.0 else -1.0
        sign0 = 1.0 if initial_branch % 2 == 0 else -1.0
        n_out[0] = d / np.linalg.norm(d) * m0_sign * sign0
    # Any remaining unresolved samples inherit the nearest defined neighbor.
    bad = np.where(~np.isfinite(n_out[:, 0]))[0]
    for j in bad:
        k = j + 1
        while k < npts and not np.isfinite(n_out[k, 0]):
            k += 1
        n_out[j] = n_out[k] if k < npts else n_out[j - 1]

    record.l = l
    states = np.column_stack([n_out, theta_out])
    meta = dict(qtraj.metadata)
    meta["continuation"] = {
        "zero_times": list(record.zero_times),
        "parity_used": list(record.parity_used),
        "final_branch": l,
    }
    out = Trajectory("axisangle", times.copy(), states, dt, omega, meta)
    return out, record
