import math

import numpy as np
import pytest

from beamtrack import frames
from beamtrack.frames import (
    Attitude,
    SingularityError,
    c_b_t,
    c_n_b,
    c_n_t,
    dcm_to_euler,
    euler_to_quat,
    extract_gimbal_angles,
    quat_to_dcm,
    rot_x,
    rot_y,
    rot_z,
    wrap_angle,
)

D2R = math.pi / 180.0


def closed_form_b_to_t(a, b, g):
    """Independent oracle: the body-to-beam DCM written out entry by entry."""
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)
    cg, sg = math.cos(g), math.sin(g)
    return np.array(
        [
            [ca * cb, sa * cb, -sb],
            [ca * sb * sg - sa * cg, sa * sb * sg + ca * cg, cb * sg],
            [sa * sg + ca * sb * cg, sa * sb * cg - ca * sg, cb * cg],
        ]
    )


class TestElementaryRotations:
    def test_zero_angle_is_identity(self):
        for rot in (rot_z, rot_y, rot_x):
            np.testing.assert_allclose(rot(0.0), np.eye(3), atol=1e-15)

    def test_rot_z_quarter_turn(self):
        np.testing.assert_allclose(
            rot_z(math.pi / 2),
            np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 1]]),
            atol=1e-15,
        )

    def test_rot_y_quarter_turn(self):
        np.testing.assert_allclose(
            rot_y(math.pi / 2),
            np.array([[0, 0, -1], [0, 1, 0], [1, 0, 0]]),
            atol=1e-15,
        )

    def test_rot_x_quarter_turn(self):
        np.testing.assert_allclose(
            rot_x(math.pi / 2),
            np.array([[1, 0, 0], [0, 0, 1], [0, -1, 0]]),
            atol=1e-15,
        )

    def test_inverse_rotation(self):
        a = 0.7321
        np.testing.assert_allclose(rot_z(a) @ rot_z(-a), np.eye(3), atol=1e-15)
        np.testing.assert_allclose(rot_y(a).T, rot_y(-a), atol=1e-15)

    def test_orthonormal_unit_determinant(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a = rng.uniform(-10, 10)
            for rot in (rot_z, rot_y, rot_x):
                r = rot(a)
                np.testing.assert_allclose(r.T @ r, np.eye(3), atol=1e-12)
                assert abs(np.linalg.det(r) - 1.0) <= 1e-12

    def test_nonfinite_angle_rejected(self):
        with pytest.raises(ValueError):
            rot_z(float("nan"))
        with pytest.raises(ValueError):
            rot_x(float("inf"))


class TestComposedTransforms:
    def test_cbt_zero_is_identity(self):
        np.testing.assert_allclose(c_b_t(0, 0, 0), np.eye(3), atol=1e-15)

    def test_cbt_azimuth_only_reduces_to_rot_z(self):
        np.testing.assert_allclose(c_b_t(0.4, 0, 0), rot_z(0.4), atol=1e-15)

    def test_cbt_entry_against_symbolic_expansion(self):
        m = c_b_t(30 * D2R, 20 * D2R, 10 * D2R)
        assert m[0, 0] == pytest.approx(math.cos(30 * D2R) * math.cos(20 * D2R), abs=1e-15)
        assert m[0, 0] == pytest.approx(0.81380, abs=5e-6)

    def test_cbt_matches_closed_form_everywhere(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            a, b, g = rng.uniform(-math.pi, math.pi, size=3)
            np.testing.assert_allclose(
                c_b_t(a, b, g), closed_form_b_to_t(a, b, g), atol=1e-14
            )

    def test_cnb_zero_attitude(self):
        np.testing.assert_allclose(c_n_b(Attitude(0, 0, 0)), np.eye(3), atol=1e-15)

    def test_cnb_yaw_only(self):
        np.testing.assert_allclose(c_n_b(Attitude(0.9, 0, 0)), rot_z(0.9), atol=1e-15)

    def test_cnb_orthogonality_random(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            att = Attitude(*rng.uniform(-math.pi, math.pi, size=3))
            m = c_n_b(att)
            np.testing.assert_allclose(m @ m.T, np.eye(3), atol=1e-12)

    def test_cnt_structure(self):
        np.testing.assert_allclose(c_n_t(0, 0, 0), np.eye(3), atol=1e-15)
        np.testing.assert_allclose(c_n_t(math.pi, 0, 0), rot_z(math.pi), atol=1e-15)
        m = c_n_t(186.11 * D2R, 50.1 * D2R, -5.05 * D2R)
        np.testing.assert_allclose(m @ m.T, np.eye(3), atol=1e-12)
        assert abs(np.linalg.det(m) - 1.0) <= 1e-12


class TestGimbalExtraction:
    def test_identity_maps_to_zero(self):
        assert extract_gimbal_angles(np.eye(3)) == (0.0, 0.0, 0.0)

    def test_round_trips_known_triple(self):
        angles = (30 * D2R, 20 * D2R, 10 * D2R)
        out = extract_gimbal_angles(c_b_t(*angles))
        np.testing.assert_allclose(out, angles, atol=1e-12)

    def test_round_trip_property(self):
        rng = np.random.default_rng(23)
        for _ in range(10_000):
            a = rng.uniform(-math.pi, math.pi)
            b = rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3)
            g = rng.uniform(-math.pi, math.pi)
            out = extract_gimbal_angles(c_b_t(a, b, g))
            assert abs(wrap_angle(out[0] - a)) <= 1e-10
            assert abs(out[1] - b) <= 1e-10
            assert abs(wrap_angle(out[2] - g)) <= 1e-10

    def test_reconstruction_matches_input_matrix(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            m = c_b_t(
                rng.uniform(-math.pi, math.pi),
                rng.uniform(-1.4, 1.4),
                rng.uniform(-math.pi, math.pi),
            )
            np.testing.assert_allclose(c_b_t(*extract_gimbal_angles(m)), m, atol=1e-10)

    def test_elevation_singularity_raises(self):
        with pytest.raises(SingularityError):
            extract_gimbal_angles(c_b_t(0.0, math.pi / 2, 0.0))

    def test_non_rotation_rejected(self):
        with pytest.raises(ValueError):
            extract_gimbal_angles(np.ones((3, 3)))


class TestQuaternions:
    def test_identity_attitude(self):
        np.testing.assert_allclose(
            euler_to_quat(Attitude(0, 0, 0)), [1, 0, 0, 0], atol=1e-15
        )

    def test_pure_yaw_quarter_turn(self):
        q = euler_to_quat(Attitude(math.pi / 2, 0, 0))
        np.testing.assert_allclose(q, [math.cos(math.pi / 4), 0, 0, math.sin(math.pi / 4)], atol=1e-12)
        assert q[0] == pytest.approx(0.70711, abs=5e-6)
        assert q[3] == pytest.approx(0.70711, abs=5e-6)

    def test_unit_norm_for_random_attitudes(self):
        rng = np.random.default_rng(17)
        for _ in range(500):
            q = euler_to_quat(Attitude(*rng.uniform(-math.pi, math.pi, size=3)))
            assert abs(np.linalg.norm(q) - 1.0) <= 1e-12

    def test_quat_identity(self):
        np.testing.assert_allclose(quat_to_dcm(np.array([1.0, 0, 0, 0])), np.eye(3), atol=1e-15)

    def test_quat_to_dcm_consistent_with_euler_chain(self):
        rng = np.random.default_rng(29)
        for _ in range(1000):
            att = Attitude(
                rng.uniform(-math.pi, math.pi),
                rng.uniform(-1.4, 1.4),
                rng.uniform(-math.pi, math.pi),
            )
            np.testing.assert_allclose(
                quat_to_dcm(euler_to_quat(att)), c_n_b(att).T, atol=1e-10
            )

    def test_double_cover(self):
        q = euler_to_quat(Attitude(0.3, -0.2, 1.1))
        np.testing.assert_allclose(quat_to_dcm(q), quat_to_dcm(-q), atol=1e-15)

    def test_off_norm_quaternion_rejected(self):
        with pytest.raises(ValueError):
            quat_to_dcm(np.array([1.0, 0.1, 0, 0]))


class TestDcmToEuler:
    def test_identity(self):
        assert dcm_to_euler(np.eye(3)) == Attitude(0.0, 0.0, 0.0)

    def test_round_trip_known(self):
        att = Attitude(45 * D2R, 10 * D2R, -20 * D2R)
        out = dcm_to_euler(quat_to_dcm(euler_to_quat(att)))
        np.testing.assert_allclose(out, att, atol=1e-12)

    def test_round_trip_property(self):
        rng = np.random.default_rng(41)
        for _ in range(10_000):
            att = Attitude(
                rng.uniform(-math.pi, math.pi),
                rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3),
                rng.uniform(-math.pi, math.pi),
            )
            out = dcm_to_euler(quat_to_dcm(euler_to_quat(att)))
            assert abs(wrap_angle(out.yaw - att.yaw)) <= 1e-10
            assert abs(out.pitch - att.pitch) <= 1e-10
            assert abs(wrap_angle(out.roll - att.roll)) <= 1e-10

    def test_pitch_singularity(self):
        m = c_n_b(Attitude(0.0, math.pi / 2, 0.0)).T
        with pytest.raises(SingularityError):
            dcm_to_euler(m)


class TestWrap:
    def test_wrap_interval(self):
        assert wrap_angle(math.pi) == pytest.approx(math.pi)
        assert wrap_angle(-math.pi) == pytest.approx(math.pi)
        assert wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
        rng = np.random.default_rng(2)
        for a in rng.uniform(-50, 50, size=500):
            w = wrap_angle(a)
            assert -math.pi < w <= math.pi
            assert abs(math.remainder(w - a, 2 * math.pi)) <= 1e-9
