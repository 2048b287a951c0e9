import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import eulerspin as es

TWO_PI = 2.0 * math.pi


def random_axis(rng):
    return es.unit(rng.standard_normal(3))


unit_vecs = st.builds(
    lambda v: es.unit(np.array(v)),
    st.tuples(*[st.floats(-1, 1).filter(lambda x: abs(x) > 1e-3)] * 3),
)
angles_interior = st.floats(0.05, TWO_PI - 0.05)


# -- rotation of points ------------------------------------------------------

def test_rotate_point_x_about_z():
    rot = es.AxisAngle(np.array([0.0, 0.0, 1.0]), math.pi / 2.0)
    out = es.rotate_point([1.0, 0.0, 0.0], rot)
    assert np.allclose(out, [0.0, 1.0, 0.0], atol=1e-15)


@given(unit_vecs, angles_interior, st.tuples(*[st.floats(-5, 5)] * 3))
@settings(max_examples=100, deadline=None)
def test_rotate_point_matches_matrix_and_preserves_norm(axis, angle, point):
    rot = es.AxisAngle(axis, angle)
    p = np.array(point)
    out = es.rotate_point(p, rot)
    assert np.allclose(out, es.matrix_from_axis_angle(rot) @ p, atol=1e-12)
    assert math.isclose(np.linalg.norm(out), np.linalg.norm(p),
                        rel_tol=1e-12, abs_tol=1e-12)


def test_matrix_is_orthogonal_det_one():
    rng = np.random.default_rng(0)
    for _ in range(50):
        R = es.matrix_from_axis_angle(es.AxisAngle(random_axis(rng),
                                                   rng.uniform(0, TWO_PI)))
        assert np.allclose(R @ R.T, np.eye(3), atol=1e-13)
        assert math.isclose(np.linalg.det(R), 1.0, abs_tol=1e-13)


# -- composition -------------------------------------------------------------

def test_compose_matches_matrix_product():
    rng = np.random.default_rng(1)
    for _ in range(100):
        r1 = es.AxisAngle(random_axis(rng), rng.uniform(0.1, TWO_PI - 0.1))
        r2 = es.AxisAngle(random_axis(rng), rng.uniform(0.1, TWO_PI - 0.1))
        r3, identity = es.compose_rotations(r1, r2)
        M = es.matrix_from_axis_angle(r2) @ es.matrix_from_axis_angle(r1)
        if not identity:
            assert np.allclose(es.matrix_from_axis_angle(r3), M, atol=1e-10)
        else:
            assert np.allclose(M, np.eye(3), atol=1e-10)


def test_compose_inverse_flags_identity():
    axis = np.array([0.0, 0.0, 1.0])
    r = es.AxisAngle(axis, 1.3)
    rinv = es.AxisAngle(-axis, 1.3)
    _, identity = es.compose_rotations(r, rinv)
    assert identity


def test_compose_same_axis_adds_angles():
    axis = es.unit(np.array([1.0, 2.0, 3.0]))
    r3, _ = es.compose_rotations(es.AxisAngle(axis, 0.7), es.AxisAngle(axis, 0.9))
    assert np.allclose(r3.axis, axis, atol=1e-12)
    assert math.isclose(r3.angle, 1.6, abs_tol=1e-12)


# -- conversions -------------------------------------------------------------

@given(unit_vecs, angles_interior)
@settings(max_examples=100, deadline=None)
def test_conversion_round_trips(axis, angle):
    aa = es.AxisAngle(axis, angle)
    for tag in ("euler", "mgibbs", "quat", "gibbs"):
        if tag == "gibbs" and abs(angle - math.pi) < 1e-6:
            continue
        if tag == "mgibbs" and angle > math.pi:
            # M alone cannot recover the cosine sign; the half-quaternion
            # round trip is only faithful on the principal interval
            continue
        val = es.convert(aa, "axisangle", tag)
        back = es.convert(val, tag, "axisangle")
        # mgibbs/quat/gibbs recover the principal angle; euler the magnitude
        R1 = es.matrix_from_axis_angle(aa)
        R2 = es.matrix_from_axis_angle(back)
        assert np.abs(R1 - R2).max() < 1e-9, tag


def test_euler_vector_round_trip_exact():
    E = np.array([0.3, -0.4, 1.2])
    aa = es.euler_vector_to_axis_angle(E)
    assert np.allclose(es.axis_angle_to_euler_vector(aa), E, atol=1e-15)


def test_gibbs_singular_at_pi():
    with pytest.raises(es.GibbsSingularityError):
        es.axis_angle_to_gibbs(es.AxisAngle(np.array([1.0, 0.0, 0.0]), math.pi))


def test_axis_undefined_at_zero():
    with pytest.raises(es.AxisUndefinedError):
        es.euler_vector_to_axis_angle(np.zeros(3))
    with pytest.raises(es.AxisUndefinedError):
        es.quaternion_to_axis_angle(es.UnitQuaternion(1.0, np.zeros(3)))


def test_quaternion_branches():
    n = np.array([0.0, 1.0, 0.0])
    q = es.axis_angle_to_quaternion(es.AxisAngle(n, 1.0))
    aa0 = es.quaternion_to_axis_angle(q, branch=0)
    assert math.isclose(aa0.angle, 1.0, abs_tol=1e-12)
    assert np.allclose(aa0.axis, n, atol=1e-12)
    aa1 = es.quaternion_to_axis_angle(q, branch=1)
    # branch 1 houses the same rotation with angle in [2*pi, 4*pi]
    assert 2 * math.pi <= aa1.angle <= 4 * math.pi
    assert np.allclose(es.matrix_from_axis_angle(aa1),
                       es.matrix_from_axis_angle(aa0), atol=1e-12)


def test_modified_gibbs_uses_m0_for_obtuse_angles():
    n = np.array([1.0, 0.0, 0.0])
    theta = 4.0  # cos(theta/2) < 0
    m = es.axis_angle_to_modified_gibbs(es.AxisAngle(n, theta))
    aa = es.modified_gibbs_to_axis_angle(m, m0=math.cos(theta / 2.0))
    assert math.isclose(aa.angle, theta, abs_tol=1e-12)
    assert np.allclose(aa.axis, n, atol=1e-12)


def test_quaternion_norm_validation():
    with pytest.raises(ValueError):
        es.UnitQuaternion(1.0, np.array([0.1, 0.0, 0.0]))


def test_euler_vector_restart():
    E = np.array([1.2, 0.0, 0.0])
    E2 = es.euler_vector_restart(E)
    # same rotation, opposite axis, complementary angle
    assert np.allclose(E2, -(2 * math.pi - 1.2) * np.array([1.0, 0.0, 0.0]),
                       atol=1e-15)
    aa1 = es.euler_vector_to_axis_angle(E)
    aa2 = es.euler_vector_to_axis_angle(E2)
    assert np.allclose(es.matrix_from_axis_angle(aa1),
                       es.matrix_from_axis_angle(aa2), atol=1e-12)


def test_gibbs_identity_zero_for_orthonormal_frame():
    res = es.gibbs_identity_residual([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 2, 3])
    assert np.abs(res).max() < 1e-15
