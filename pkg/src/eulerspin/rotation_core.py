"""Exact rotation algebra: Rodrigues rotation and composition, representation
conversions, and the Gibbs four-vector identity.

Everything here is closed-form (no ODEs) and doubles as the oracle layer for
the numerical integrators.  All types are immutable values and every function
is pure.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AxisUndefinedError, GibbsSingularityError

TWO_PI = 2.0 * math.pi

# Axis reported when the net rotation is the identity; paired with a flag,
# never NaN, so downstream arithmetic stays total.
IDENTITY_AXIS = np.array([0.0, 0.0, 1.0])

_UNIT_TOL = 1e-12
_QUAT_NORM_TOL = 1e-9


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector components must be finite")
    return a


def unit(v) -> np.ndarray:
    """Normalize a 3-vector, raising on zero length."""
    a = _as_vec3(v)
    n = np.linalg.norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return a / n


@dataclass(frozen=True)
class AxisAngle:
    """Rotation by ``angle`` radians about the unit vector ``axis``.

    The angle is unbounded in sign and magnitude: (n, theta) and (-n, -theta)
    describe the same physical rotation, and values beyond 2*pi carry winding
    information for continued solutions.
    """

    axis: np.ndarray
    angle: float

    def __post_init__(self):
        a = _as_vec3(self.axis)
        if abs(np.linalg.norm(a) - 1.0) > _UNIT_TOL:
            raise ValueError("axis must be unit length to 1e-12")
        object.__setattr__(self, "axis", a)
        object.__setattr__(self, "angle", float(self.angle))


@dataclass(frozen=True)
class UnitQuaternion:
    """Attitude quaternion (m0, m) with m0 = cos(theta/2), m = n*sin(theta/2)."""

    m0: float
    m: np.ndarray

    def __post_init__(self):
        v = _as_vec3(self.m)
        object.__setattr__(self, "m", v)
        object.__setattr__(self, "m0", float(self.m0))
        if abs(self.norm() - 1.0) > _QUAT_NORM_TOL:
            raise ValueError("quaternion norm must be 1 to 1e-9")

    def norm(self) -> float:
        return math.sqrt(self.m0 * self.m0 + float(self.m @ self.m))

    def normalized(self) -> "UnitQuaternion":
        n = self.norm()
        return UnitQuaternion(self.m0 / n, self.m / n)

    def as_array(self) -> np.ndarray:
        return np.array([self.m0, self.m[0], self.m[1], self.m[2]])


@dataclass(frozen=True)
class GeneralizedRep:
    """A generalized axis-scaling f with F = n*f(theta).

    ``f`` must be odd with f(0) = 0 and f'(0) > 0.  Derivative handles are
    explicit closed forms, not numeric differences: the generalized ODE needs
    f'(theta) exactly, and all three instances used here (theta, sin(theta/2),
    tan(theta/2)) have simple derivatives.
    """

    name: str
    f: Callable[[float], float]
    f_prime: Callable[[float], float]
    f_inverse: Callable[[float], float]
    inverse_domain: tuple = (0.0, math.pi)
    f_prime_at_0: float = 1.0
    f_third_at_0: float = 0.0

    def __post_init__(self):
        if self.f(0.0) != 0.0:
            raise ValueError("f(0) must be 0")
        if self.f_prime_at_0 <= 0.0:
            raise ValueError("f'(0) must be positive")
        for x in (0.3, 0.9, 1.7):
            if abs(self.f(-x) + self.f(x)) > 1e-12:
                raise ValueError("f must be odd")


EULER_REP = GeneralizedRep(
    name="euler",
    f=lambda t: t,
    f_prime=lambda t: 1.0,
    f_inverse=lambda x: x,
    inverse_domain=(0.0, math.inf),
    f_prime_at_0=1.0,
    f_third_at_0=0.0,
)

MODIFIED_GIBBS_REP = GeneralizedRep(
    name="mgibbs",
    f=lambda t: math.sin(0.5 * t),
    f_prime=lambda t: 0.5 * math.cos(0.5 * t),
    f_inverse=lambda x: 2.0 * math.asin(x),
    inverse_domain=(0.0, math.pi),
    f_prime_at_0=0.5,
    f_third_at_0=-0.125,
)

GIBBS_REP = GeneralizedRep(
    name="gibbs",
    f=lambda t: math.tan(0.5 * t),
    f_prime=lambda t: 0.5 / math.cos(0.5 * t) ** 2,
    f_inverse=lambda x: 2.0 * math.atan(x),
    inverse_domain=(0.0, math.pi),
    f_prime_at_0=0.5,
    f_third_at_0=0.25,
)


# ---------------------------------------------------------------------------
# Rodrigues rotation and composition
# ---------------------------------------------------------------------------

def rotate_point(r, rot: AxisAngle) -> np.ndarray:
    """Rotate point r by rot using the Rodrigues rotation formula.

    r*cos(theta) + n (n.r)(1 - cos(theta)) + (n x r) sin(theta).
    Norm preserving; theta a multiple of 2*pi returns r exactly.
    """
    r = _as_vec3(r)
    n = rot.axis
    c = math.cos(rot.angle)
    s = math.sin(rot.angle)
    return r * c + n * float(n @ r) * (1.0 - c) + np.cross(n, r) * s


def matrix_from_axis_angle(rot: AxisAngle) -> np.ndarray:
    """Rotation matrix R with R @ r == rotate_point(r, rot)."""
    n = rot.axis
    c = math.cos(rot.angle)
    s = math.sin(rot.angle)
    k = np.array([
        [0.0, -n[2], n[1]],
        [n[2], 0.0, -n[0]],
        [-n[1], n[0], 0.0],
    ])
    return c * np.eye(3) + (1.0 - c) * np.outer(n, n) + s * k


def compose_rotations(first: AxisAngle, second: AxisAngle) -> tuple[AxisAngle, bool]:
    """Axis/angle of doing ``first`` then ``second`` (Rodrigues composition).

    Returns (result, identity_flag).  The result angle is reduced to
    [0, 2*pi) with a normalized axis; when the net rotation is the identity
    the axis is undefined, so the canonical placeholder axis is reported with
    the flag set.  Branch continuation across 2*pi is deliberately not this
    function's job.
    """
    a1, a2 = first.angle, second.angle
    n1, n2 = first.axis, second.axis
    c1, s1 = math.cos(0.5 * a1), math.sin(0.5 * a1)
    c2, s2 = math.cos(0.5 * a2), math.sin(0.5 * a2)
    cos_half = c2 * c1 - float(n2 @ n1) * s2 * s1
    vec = n2 * (s2 * c1) + n1 * (c2 * s1) + np.cross(n2, n1) * (s2 * s1)
    sin_half = float(np.linalg.norm(vec))
    if sin_half < 1e-15:
        return AxisAngle(IDENTITY_AXIS, 0.0), True
    angle = 2.0 * math.atan2(sin_half, cos_half)  # in [0, 2*pi]
    if angle >= TWO_PI:
        angle -= TWO_PI
    return AxisAngle(vec / sin_half, angle), False


def gibbs_identity_residual(A, B, C, D) -> np.ndarray:
    """Residual of Gibbs' 1901 four-vector identity; zero in exact arithmetic.

    D (A.(BxC)) - BxC (A.D) - CxA (B.D) - AxB (C.D)
    """
    A, B, C, D = _as_vec3(A), _as_vec3(B), _as_vec3(C), _as_vec3(D)
    bxc = np.cross(B, C)
    return (
        D * float(A @ bxc)
        - bxc * float(A @ D)
        - np.cross(C, A) * float(B @ D)
        - np.cross(A, B) * float(C @ D)
    )


# ---------------------------------------------------------------------------
# Representation conversions
# ---------------------------------------------------------------------------

def axis_angle_to_euler_vector(rot: AxisAngle) -> np.ndarray:
    return rot.axis * rot.angle


def axis_angle_to_modified_gibbs(rot: AxisAngle) -> np.ndarray:
    return rot.axis * math.sin(0.5 * rot.angle)


def axis_angle_to_quaternion(rot: AxisAngle) -> UnitQuaternion:
    return UnitQuaternion(math.cos(0.5 * rot.angle),
                          rot.axis * math.sin(0.5 * rot.angle))


def axis_angle_to_gibbs(rot: AxisAngle) -> np.ndarray:
    # tan(theta/2) has poles at theta = pi + 2*pi*k.
    if abs(math.remainder(rot.angle - math.pi, TWO_PI)) < 1e-9:
        raise GibbsSingularityError(
            f"Gibbs vector undefined at theta = {rot.angle!r} (pole of tan(theta/2))")
    return rot.axis * math.tan(0.5 * rot.angle)


def euler_vector_to_axis_angle(E) -> AxisAngle:
    """Extract (n, theta) with the default convention theta = |E| >= 0."""
    E = _as_vec3(E)
    theta = float(np.linalg.norm(E))
    if theta == 0.0:
        raise AxisUndefinedError("axis undefined for the zero Euler vector")
    return AxisAngle(E / theta, theta)


def quaternion_to_axis_angle(q: UnitQuaternion, branch: int = 0) -> AxisAngle:
    """Extract (n, theta) with theta in [2*pi*branch, 2*pi*(branch + 1)].

    The principal angle uses 2*atan2(|m|, m0) rather than arccos(m0) for
    conditioning near m0 = +-1.  With the default branch 0, theta lies in
    [0, 2*pi].
    """
    mnorm = float(np.linalg.norm(q.m))
    theta_p = 2.0 * math.atan2(mnorm, q.m0)  # principal, [0, 2*pi]
    if mnorm < 1e-15:
        raise AxisUndefinedError("axis undefined at sin(theta/2) = 0")
    if branch % 2 == 0:
        theta = TWO_PI * branch + theta_p
    else:
        theta = TWO_PI * (branch + 1) - theta_p
    # sin(theta/2) = (-1)**branch * sin(theta_p/2), and sin(theta_p/2) = |m| > 0.
    n = q.m / mnorm * (1.0 if branch % 2 == 0 else -1.0)
    return AxisAngle(n, theta)


def modified_gibbs_to_axis_angle(m, m0: float | None = None) -> AxisAngle:
    """Extract (n, theta) from M = n*sin(theta/2).

    M alone determines theta only on its invertible range [0, pi] (principal
    branch).  Supplying ``m0`` = cos(theta/2) lifts the result to [0, 2*pi];
    for full branch data go through UnitQuaternion.
    """
    m = _as_vec3(m)
    s = float(np.linalg.norm(m))
    if s < 1e-15:
        raise AxisUndefinedError("axis undefined at sin(theta/2) = 0")
    if m0 is None:
        theta = 2.0 * math.asin(min(s, 1.0))
    else:
        theta = 2.0 * math.atan2(s, m0)
    return AxisAngle(m / s, theta)


def gibbs_to_axis_angle(g) -> AxisAngle:
    """Extract (n, theta) from G = n*tan(theta/2); theta in (0, pi)."""
    g = _as_vec3(g)
    t = float(np.linalg.norm(g))
    if t < 1e-15:
        raise AxisUndefinedError("axis undefined at tan(theta/2) = 0")
    return AxisAngle(g / t, 2.0 * math.atan(t))


def euler_vector_restart(E) -> np.ndarray:
    """Equivalent Euler vector with the axis flipped and angle 2*pi - theta.

    Maps |E| = theta in (0, 2*pi) to the same physical rotation written as
    -n*(2*pi - theta); e.g. |E| = 3*pi/2 restarts as -E/3 with angle pi/2.
    Useful for restarting the Euler-vector ODE short of a 2*pi boundary.
    """
    E = _as_vec3(E)
    theta = float(np.linalg.norm(E))
    if not 0.0 < theta < TWO_PI:
        raise ValueError("restart form requires 0 < |E| < 2*pi")
    return -E * (TWO_PI - theta) / theta


_TO_AXIS_ANGLE = {
    "axisangle": lambda v, branch: v,
    "euler": lambda v, branch: euler_vector_to_axis_angle(v),
    "mgibbs": lambda v, branch: modified_gibbs_to_axis_angle(v),
    "gibbs": lambda v, branch: gibbs_to_axis_angle(v),
    "quat": lambda v, branch: quaternion_to_axis_angle(v, branch),
}

_FROM_AXIS_ANGLE = {
    "axisangle": lambda aa: aa,
    "euler": axis_angle_to_euler_vector,
    "mgibbs": axis_angle_to_modified_gibbs,
    "gibbs": axis_angle_to_gibbs,
    "quat": axis_angle_to_quaternion,
}

REPRESENTATIONS = tuple(_FROM_AXIS_ANGLE)


def convert(value, source: str, target: str, branch: int = 0):
    """Convert between representation tags via the axis/angle hub.

    Tags: 'axisangle', 'euler', 'mgibbs', 'gibbs', 'quat'.  ``branch`` is the
    integer branch hint used when extracting the angle from a quaternion.
    """
    if source not in _TO_AXIS_ANGLE:
        raise ValueError(f"unknown source representation {source!r}")
    if target not in _FROM_AXIS_ANGLE:
        raise ValueError(f"unknown target representation {target!r}")
    if source == target:
        return value
    return _FROM_AXIS_ANGLE[target](_TO_AXIS_ANGLE[source](value, branch))
