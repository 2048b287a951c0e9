"""Exact axis/angle solution for constant angular velocity.

For constant unit-magnitude omega the angle obeys
theta(t) = 2 Cos^-1(a cos(t/2 + b)) and the axis traces an explicit curve
built from the initial axis and the component of omega transverse to it.
Arbitrary constant |omega| reduces to this by rescaling time.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParallelAxisError, ThetaRangeError
from .rotation_core import unit


@dataclass(frozen=True)
class SpinorSolution:
    """Precomputed quantities for the constant-omega closed form.

    a, b parameterize the angle law theta = 2 Cos^-1(a cos(s/2 + b)) in
    scaled time s = |omega| (t - t0); e1, e2 span the plane of the axis
    curve p(s) = e1 cos(s/2 + b) + e2 sin(s/2 + b)/sqrt(1 - a^2),
    with n = p/|p|.
    """

    omega_hat: np.ndarray
    speed: float
    t0: float
    a: float
    b: float
    k: float
    e1: np.ndarray
    e2: np.ndarray

    def theta(self, t):
        return spinor_theta(self, t)

    def axis(self, t):
        return spinor_axis(self, t)


def spinor_params(n0, theta0: float, omega, t0: float = 0.0) -> SpinorSolution:
    """Build the closed-form solution from the initial axis and angle.

    Requires theta0 strictly inside (0, 2*pi) and n0 not parallel to omega
    (the parallel case degenerates to theta growing linearly about a fixed
    axis and is rejected so callers handle it explicitly).
    """
    n0 = np.asarray(n0, dtype=float)
    w = np.asarray(omega, dtype=float)
    speed = float(np.linalg.norm(w))
    if speed == 0.0:
        raise ValueError("omega must be nonzero")
    if not 0.0 < theta0 < 2.0 * math.pi:
        raise ThetaRangeError(
            f"theta0 = {theta0!r} outside the open interval (0, 2*pi)")
    w_hat = w / speed
    c = float(w_hat @ n0)
    perp = w_hat - n0 * c
    perp_norm = float(np.linalg.norm(perp))
    if perp_norm < 1e-12:
        raise ParallelAxisError("initial axis is parallel to omega")

    half = 0.5 * theta0
    sh, ch = math.sin(half), math.cos(half)
    a = math.sqrt(max(1.0 - (1.0 - c * c) * sh * sh, 0.0))
    # cos b and sin b are taken jointly from the same a, so b lands on the
    # correct quadrant branch.
    b = math.atan2(c * sh / a, ch / a)
    k = c / a

    u1 = perp / perp_norm
    u2 = np.cross(u1, n0)
    u = u1 * ch + u2 * sh
    # sqrt(1 - k^2) equals sqrt(1 - c^2) cos(theta0/2)/a and must carry the
    # cosine's sign, or the axis curve starts off n0 for theta0 > pi.
    root = math.sqrt(max(1.0 - c * c, 0.0)) * ch / a
    e1 = n0 * root - u * k
    e2 = n0 * k + u * root
    return SpinorSolution(w_hat, speed, t0, a, b, k, e1, e2)


def _phase(sol: SpinorSolution, t):
    return 0.5 * sol.speed * (np.asarray(t, dtype=float) - sol.t0) + sol.b


def spinor_theta(sol: SpinorSolution, t):
    """theta(t) = 2 Cos^-1(a cos(phase)); the argument is clamped to [-1, 1]
    against rounding so boundary hits (a = 1) cannot produce NaN."""
    arg = np.clip(sol.a * np.cos(_phase(sol, t)), -1.0, 1.0)
    return 2.0 * np.arccos(arg)


def spinor_axis(sol: SpinorSolution, t):
    """Unit axis n(t); for array t the result has shape (len(t), 3)."""
    ph = _phase(sol, t)
    amp = 1.0 / math.sqrt(max(1.0 - sol.a * sol.a, 1e-300))
    p = (np.multiply.outer(np.cos(ph), sol.e1)
         + np.multiply.outer(np.sin(ph) * amp, sol.e2))
    norm = np.linalg.norm(p, axis=-1)
    return p / norm[..., None] if p.ndim > 1 else p / norm


def exact_propagate(n0, theta0: float, omega, t0: float, t) -> tuple[np.ndarray, np.ndarray]:
    """(axis, theta) arrays at the requested times for constant omega."""
    sol = spinor_params(n0, theta0, omega, t0)
    return spinor_axis(sol, t), spinor_theta(sol, t)
