"""Angular-velocity providers omega(t) and the time transforms built on them.

Models are immutable after construction; evaluation is pure and thread-safe.
"""

import csv
import math
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import NotDifferentiableError, OmegaRangeError

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=200)


class OmegaModel:
    """Base class: callable omega(t) -> 3-vector plus derivative queries."""

    def __call__(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def _eval3(self, t: float) -> tuple[float, float, float]:
        # Fast-path hook used by the integrator hot loops.
        w = self(t)
        return float(w[0]), float(w[1]), float(w[2])

    def derivative(self, t: float, order: int) -> np.ndarray:
        """d^order omega / dt^order; order 0 returns omega itself."""
        if order == 0:
            return self(t)
        return self._fd_derivative(t, order)

    def _fd_derivative(self, t: float, order: int) -> np.ndarray:
        # Central differences.  h = 1e-4 keeps O(h^2) truncation below any
        # stated tolerance for orders 1-2; higher orders need a wider stencil
        # step or the 1/h^order noise amplification swamps the estimate.
        h = 1e-4 if order <= 2 else 1e-2
        if order == 1:
            return (self(t + h) - self(t - h)) / (2.0 * h)
        if order == 2:
            return (self(t + h) - 2.0 * self(t) + self(t - h)) / h**2
        if order == 3:
            return (self(t + 2 * h) - 2 * self(t + h)
                    + 2 * self(t - h) - self(t - 2 * h)) / (2.0 * h**3)
        if order == 4:
            return (self(t + 2 * h) - 4 * self(t + h) + 6 * self(t)
                    - 4 * self(t - h) + self(t - 2 * h)) / h**4
        raise ValueError("derivative order must be 0..4")


class ConstantOmega(OmegaModel):
    """omega(t) = vector, constant in time."""

    def __init__(self, vector):
        v = np.asarray(vector, dtype=float)
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise ValueError("constant omega must be a finite 3-vector")
        self.vector = v
        self._tuple = (float(v[0]), float(v[1]), float(v[2]))

    def __call__(self, t):
        return self.vector.copy()

    def _eval3(self, t):
        return self._tuple

    def derivative(self, t, order):
        if order == 0:
            return self.vector.copy()
        return np.zeros(3)


class RotatingPlaneOmega(OmegaModel):
    """omega rotating in the x-y plane at angular frequency alpha.

    omega(t) = amplitude * (cos(alpha t), sin(alpha t), 0); the driving
    period is T_alpha = 2*pi/alpha.
    """

    def __init__(self, alpha: float, amplitude: float = 1.0):
        if alpha <= 0.0:
            raise ValueError("alpha must be positive")
        self.alpha = float(alpha)
        self.amplitude = float(amplitude)

    @classmethod
    def from_period(cls, period: float, amplitude: float = 1.0):
        return cls(2.0 * math.pi / period, amplitude)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.alpha

    def __call__(self, t):
        a = self.alpha * t
        return self.amplitude * np.array([math.cos(a), math.sin(a), 0.0])

    def _eval3(self, t):
        a = self.alpha * t
        return (self.amplitude * math.cos(a), self.amplitude * math.sin(a), 0.0)

    def derivative(self, t, order):
        # d^k/dt^k cos(alpha t) = alpha^k cos(alpha t + k*pi/2), same for sin.
        a = self.alpha * t + order * 0.5 * math.pi
        scale = self.amplitude * self.alpha**order
        return scale * np.array([math.cos(a), math.sin(a), 0.0])


class PathologicalOmega(OmegaModel):
    """The wildly spinning example: continuous at 0 but the rotation axis is not.

    omega(t) = 3t^2 (sin(1/t), cos(1/t), 0) + t (-cos(1/t), sin(1/t), 0) for
    t > 0, with omega(0) = 0.  Defined for t >= 0 only; the derivative at
    t = 0 does not exist and is reported as an error, never guessed.
    """

    def __call__(self, t):
        if t < 0.0:
            raise OmegaRangeError("pathological omega is defined for t >= 0 only")
        if t == 0.0:
            return np.zeros(3)
        s, c = math.sin(1.0 / t), math.cos(1.0 / t)
        return np.array([3.0 * t * t * s - t * c, 3.0 * t * t * c + t * s, 0.0])

    def derivative(self, t, order):
        if order == 0:
            return self(t)
        if t <= 0.0:
            raise NotDifferentiableError(
                "pathological omega has no derivative at t = 0")
        if order == 1:
            s, c = math.sin(1.0 / t), math.cos(1.0 / t)
            return np.array([
                6.0 * t * s - 4.0 * c - s / t,
                6.0 * t * c + 4.0 * s - c / t,
                0.0,
            ])
        return self._fd_derivative(t, order)

    def integral(self, t: float) -> np.ndarray:
        """Exact integral of omega over [0, t]: t^3 (sin(1/t), cos(1/t), 0)."""
        if t < 0.0:
            raise OmegaRangeError("pathological omega is defined for t >= 0 only")
        if t == 0.0:
            return np.zeros(3)
        return t**3 * np.array([math.sin(1.0 / t), math.cos(1.0 / t), 0.0])


class TabulatedOmega(OmegaModel):
    """Cubic-spline interpolation of sampled omega values.

    Cubic rather than linear so that the derivative estimates the boundary
    continuation machinery needs remain meaningful.
    """

    def __init__(self, times: Sequence[float], values):
        t = np.asarray(times, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.ndim != 1 or len(t) < 4:
            raise ValueError("tabulated omega needs at least 4 samples")
        if v.shape != (len(t), 3):
            raise ValueError("values must be an (n, 3) array")
        if not np.all(np.diff(t) > 0.0):
            raise ValueError("sample times must be strictly increasing")
        self.times = t
        self.values = v
        self._spline = CubicSpline(t, v, axis=0)

    @classmethod
    def from_csv(cls, path) -> "TabulatedOmega":
        """Load samples from a CSV with header t,wx,wy,wz."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header] != ["t", "wx", "wy", "wz"]:
                raise ValueError(f"expected header t,wx,wy,wz in {path}")
            rows = [[float(x) for x in row] for row in reader if row]
        data = np.asarray(rows)
        return cls(data[:, 0], data[:, 1:4])

    def _check_range(self, t):
        if t < self.times[0] or t > self.times[-1]:
            raise OmegaRangeError(
                f"t = {t} outside tabulated range [{self.times[0]}, {self.times[-1]}]")

    def __call__(self, t):
        self._check_range(t)
        return np.asarray(self._spline(t), dtype=float)

    def derivative(self, t, order):
        if order == 0:
            return self(t)
        h = 1e-4 if order <= 2 else 1e-2
        span = 2 * h if order <= 2 else 4 * h
        self._check_range(t - span)
        self._check_range(t + span)
        return self._fd_derivative(t, order)


class ReversedOmega(OmegaModel):
    """Time-reversed model: omega*(t) = -inner(t1 - t)."""

    def __init__(self, inner: OmegaModel, t1: float):
        self.inner = inner
        self.t1 = float(t1)

    def __call__(self, t):
        return -self.inner(self.t1 - t)

    def _eval3(self, t):
        x, y, z = self.inner._eval3(self.t1 - t)
        return (-x, -y, -z)

    def derivative(self, t, order):
        # d^k/dt^k [-inner(t1 - t)] = (-1)^(k+1) inner^(k)(t1 - t)
        sign = 1.0 if order % 2 == 1 else -1.0
        return sign * self.inner.derivative(self.t1 - t, order)


class CallableOmega(OmegaModel):
    """Wrap an arbitrary omega(t) function, with optional analytic derivatives.

    ``derivatives`` maps order -> callable; orders not supplied fall back to
    central finite differences.
    """

    def __init__(self, func: Callable[[float], np.ndarray],
                 derivatives: dict[int, Callable[[float], np.ndarray]] | None = None):
        self.func = func
        self.analytic = dict(derivatives or {})

    def __call__(self, t):
        return np.asarray(self.func(t), dtype=float)

    def derivative(self, t, order):
        if order == 0:
            return self(t)
        if order in self.analytic:
            return np.asarray(self.analytic[order](t), dtype=float)
        return self._fd_derivative(t, order)


def omega_eval(model: OmegaModel, t: float) -> np.ndarray:
    return model(t)


def omega_derivatives(model: OmegaModel, t: float, max_order: int) -> list[np.ndarray]:
    """Derivatives of omega at t, orders 0 through max_order inclusive."""
    if max_order > 4:
        raise ValueError("max_order must be <= 4")
    return [model.derivative(t, k) for k in range(max_order + 1)]


def arc_time(model: OmegaModel, t0: float, t: float) -> float:
    """tau(t) = integral of |omega(u)| du over [t0, t] by adaptive quadrature."""
    if t < t0:
        raise ValueError("t must be >= t0")
    if t == t0:
        return 0.0
    if isinstance(model, ConstantOmega):
        return float(np.linalg.norm(model.vector)) * (t - t0)
    if isinstance(model, RotatingPlaneOmega):
        return abs(model.amplitude) * (t - t0)
    val, _ = quad(lambda u: float(np.linalg.norm(model(u))), t0, t, **_QUAD_OPTS)
    return val


def integrated_omega(model: OmegaModel, t0: float, t: float) -> np.ndarray:
    """Componentwise integral of omega over [t0, t]."""
    if t < t0:
        raise ValueError("t must be >= t0")
    if isinstance(model, ConstantOmega):
        return model.vector * (t - t0)
    if isinstance(model, RotatingPlaneOmega):
        a = model.alpha
        amp = model.amplitude / a
        return amp * np.array([
            math.sin(a * t) - math.sin(a * t0),
            math.cos(a * t0) - math.cos(a * t),
            0.0,
        ])
    if isinstance(model, PathologicalOmega):
        return model.integral(t) - model.integral(t0)
    out = np.empty(3)
    for k in range(3):
        out[k], _ = quad(lambda u, k=k: float(model(u)[k]), t0, t, **_QUAD_OPTS)
    return out
