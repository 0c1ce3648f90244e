"""Rotation algebra and attitude representations.

Conventions used throughout the package:

* All angles are radians; degrees appear only at config/CSV boundaries.
* Rotation matrices are passive (frame rotations).  ``rot_z(a)`` maps the
  coordinates of a fixed vector from the original frame to a frame rotated
  by ``a`` about z.
* ``c_n_b`` etc. are direction cosine matrices named source-to-target:
  ``c_n_b(att) @ v_n`` gives the vector in body coordinates.
* Quaternions are scalar-first arrays ``[q0, q1, q2, q3]`` with unit norm.
* The yaw/pitch/roll sequence is z-y-x: ``c_n_b = rot_x(roll) @
  rot_y(pitch) @ rot_z(yaw)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi

# asin argument threshold at which pitch/elevation extraction degenerates
GIMBAL_LOCK_EPS = 1e-9


class SingularityError(ValueError):
    """Raised when an Euler extraction hits the +/-90 degree singularity."""


class Attitude(NamedTuple):
    """UAV orientation relative to the north-east-down frame, radians."""

    yaw: float
    pitch: float
    roll: float


def wrap_angle(angle: float) -> float:
    """Wrap an angle to the canonical interval (-pi, pi]."""
    r = math.fmod(angle + math.pi, TWO_PI)
    if r <= 0.0:
        r += TWO_PI
    return r - math.pi


def _check_finite(angle: float) -> float:
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle!r}")
    return angle


def rot_z(angle: float) -> np.ndarray:
    """Frame rotation by ``angle`` about the z axis."""
    a = _check_finite(angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(angle: float) -> np.ndarray:
    """Frame rotation by ``angle`` about the y axis."""
    a = _check_finite(angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def rot_x(angle: float) -> np.ndarray:
    """Frame rotation by ``angle`` about the x axis."""
    a = _check_finite(angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])


def c_b_t(azimuth: float, elevation: float, polarization: float) -> np.ndarray:
    """Body-to-beam DCM: z-rotation by azimuth, y by elevation, x by polarization."""
    return rot_x(polarization) @ rot_y(elevation) @ rot_z(azimuth)


def c_n_b(attitude: Attitude) -> np.ndarray:
    """NED-to-body DCM from yaw/pitch/roll."""
    return rot_x(attitude.roll) @ rot_y(attitude.pitch) @ rot_z(attitude.yaw)


def c_n_t(heading: float, elevation: float, polarization: float) -> np.ndarray:
    """NED-to-beam DCM from the pointing Euler angles."""
    return rot_x(polarization) @ rot_y(elevation) @ rot_z(heading)


def is_rotation(matrix: np.ndarray, tol: float = 1e-8) -> bool:
    """True when ``matrix`` is orthonormal with determinant +1 within ``tol``."""
    m = np.asarray(matrix, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    return (
        np.abs(m @ m.T - np.eye(3)).max() <= tol
        and abs(np.linalg.det(m) - 1.0) <= tol
    )


def _require_rotation(matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    if not is_rotation(m):
        raise ValueError("input is not a rotation matrix")
    return m


def extract_gimbal_angles(matrix: np.ndarray) -> tuple[float, float, float]:
    """Recover (azimuth, elevation, polarization) from a body-to-beam DCM.

    Inverse of :func:`c_b_t` on the open domain |elevation| < pi/2.  Uses
    quadrant-correct arctangents so the round trip is exact away from the
    elevation singularity.

    Raises
    ------
    SingularityError
        When |C13| is within ``GIMBAL_LOCK_EPS`` of 1 (elevation at +/-90 deg).
    """
    m = _require_rotation(matrix)
    if abs(m[0, 2]) >= 1.0 - GIMBAL_LOCK_EPS:
        raise SingularityError("elevation at +/-90 deg: azimuth/polarization undefined")
    azimuth = math.atan2(m[0, 1], m[0, 0])
    elevation = -math.asin(m[0, 2])
    polarization = math.atan2(m[1, 2], m[2, 2])
    return azimuth, elevation, polarization


def euler_to_quat(attitude: Attitude) -> np.ndarray:
    """Unit quaternion (scalar first) for the z-y-x attitude sequence."""
    cy, sy = math.cos(attitude.yaw / 2), math.sin(attitude.yaw / 2)
    cp, sp = math.cos(attitude.pitch / 2), math.sin(attitude.pitch / 2)
    cr, sr = math.cos(attitude.roll / 2), math.sin(attitude.roll / 2)
    q = np.array(
        [
            cy * cp * cr + sy * sp * sr,
            cy * cp * sr - sy * sp * cr,
            cy * sp * cr + sy * cp * sr,
            sy * cp * cr - cy * sp * sr,
        ]
    )
    return q / np.linalg.norm(q)


def quat_to_dcm(q: np.ndarray) -> np.ndarray:
    """Body-to-NED DCM from a unit quaternion.

    For ``q = euler_to_quat(a)`` this equals ``c_n_b(a).T``.  ``q`` and
    ``-q`` map to the same matrix.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise ValueError("quaternion must have four components")
    n = np.linalg.norm(q)
    if abs(n - 1.0) > 1e-6:
        raise ValueError(f"quaternion norm {n} departs from 1 beyond 1e-6")
    q0, q1, q2, q3 = q / n
    return np.array(
        [
            [
                q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3,
                2.0 * (q1 * q2 - q0 * q3),
                2.0 * (q1 * q3 + q0 * q2),
            ],
            [
                2.0 * (q1 * q2 + q0 * q3),
                q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3,
                2.0 * (q2 * q3 - q0 * q1),
            ],
            [
                2.0 * (q1 * q3 - q0 * q2),
                2.0 * (q2 * q3 + q0 * q1),
                q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3,
            ],
        ]
    )


def dcm_to_euler(matrix: np.ndarray) -> Attitude:
    """Yaw/pitch/roll from a body-to-NED DCM.

    Raises
    ------
    SingularityError
        When |C31| is within ``GIMBAL_LOCK_EPS`` of 1 (pitch at +/-90 deg).
    """
    m = _require_rotation(matrix)
    if abs(m[2, 0]) >= 1.0 - GIMBAL_LOCK_EPS:
        raise SingularityError("pitch at +/-90 deg: yaw/roll undefined")
    yaw = math.atan2(m[1, 0], m[0, 0])
    pitch = -math.asin(m[2, 0])
    roll = math.atan2(m[2, 1], m[2, 2])
    return Attitude(yaw, pitch, roll)
