"""Quaternion-state Kalman filter fusing gyro propagation with
accelerometer/GPS attitude measurements.

The state is the unit attitude quaternion propagated by a first-order
transition matrix built from measured body rates.  The measurement is a
quaternion assembled from GPS yaw and accelerometer pitch/roll, observed
directly (identity observation matrix), hemisphere-aligned with the
prediction before the innovation.  The estimate is renormalized after
every update.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import frames
from .frames import Attitude


class NumericalError(RuntimeError):
    """Raised when the innovation covariance cannot be inverted."""


@dataclass
class FilterState:
    q: np.ndarray  # unit quaternion estimate, scalar first
    kappa: np.ndarray  # 4x4 estimate covariance
    q_chi: np.ndarray  # 4x4 process noise covariance
    q_u: np.ndarray  # 4x4 measurement noise covariance


def make_filter_state(
    q0: np.ndarray,
    kappa0: float = 1e-2,
    process_noise: float = 1e-6,
    measurement_noise: float = 1e-4,
) -> FilterState:
    """Build a filter state with scaled-identity covariances."""
    q = np.asarray(q0, dtype=float)
    return FilterState(
        q=q / np.linalg.norm(q),
        kappa=kappa0 * np.eye(4),
        q_chi=process_noise * np.eye(4),
        q_u=measurement_noise * np.eye(4),
    )


def transition_matrix(body_rates: np.ndarray, sample_period: float) -> np.ndarray:
    """First-order quaternion propagation: I + (T_s/2) * Omega(omega)."""
    wx, wy, wz = np.asarray(body_rates, dtype=float)
    omega = np.array(
        [
            [0.0, -wx, -wy, -wz],
            [wx, 0.0, wz, -wy],
            [wy, -wz, 0.0, wx],
            [wz, wy, -wx, 0.0],
        ]
    )
    return np.eye(4) + (sample_period / 2.0) * omega


def predict(state: FilterState, body_rates: np.ndarray, sample_period: float) -> FilterState:
    """Propagate estimate and covariance one step; returns the prior."""
    gamma = transition_matrix(body_rates, sample_period)
    q_pred = gamma @ state.q
    kappa_pred = gamma @ state.kappa @ gamma.T + state.q_chi
    return replace(state, q=q_pred, kappa=kappa_pred)


def measurement_quat(
    yaw_m: float, pitch_m: float, roll_m: float, q_ref: np.ndarray | None = None
) -> np.ndarray:
    """Measurement quaternion from sensor angles, hemisphere-aligned to ``q_ref``.

    q and -q encode the same attitude; aligning the sign keeps the linear
    innovation small.
    """
    z = frames.euler_to_quat(Attitude(yaw_m, pitch_m, roll_m))
    if q_ref is not None and float(np.dot(z, q_ref)) < 0.0:
        z = -z
    return z


def update(state: FilterState, z: np.ndarray) -> FilterState:
    """Kalman update with identity observation; renormalizes the estimate."""
    innovation_cov = state.kappa + state.q_u
    try:
        gain = state.kappa @ np.linalg.inv(innovation_cov)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular innovation covariance") from exc
    q_new = state.q + gain @ (np.asarray(z, dtype=float) - state.q)
    norm = np.linalg.norm(q_new)
    if norm == 0.0:
        raise NumericalError("update produced a zero quaternion")
    kappa_new = (np.eye(4) - gain) @ state.kappa
    kappa_new = 0.5 * (kappa_new + kappa_new.T)
    return replace(state, q=q_new / norm, kappa=kappa_new)


def fuse_step(
    state: FilterState,
    body_rates_measured: np.ndarray,
    yaw_m: float,
    pitch_m: float,
    roll_m: float,
    sample_period: float,
) -> tuple[FilterState, Attitude]:
    """One full fusion cycle: predict, measure, update, extract attitude."""
    prior = predict(state, body_rates_measured, sample_period)
    z = measurement_quat(yaw_m, pitch_m, roll_m, q_ref=prior.q)
    posterior = update(prior, z)
    attitude = frames.dcm_to_euler(frames.quat_to_dcm(posterior.q))
    return posterior, attitude


def quat_exact_step(q: np.ndarray, body_rates: np.ndarray, sample_period: float) -> np.ndarray:
    """Exact constant-rate quaternion propagation.

    Closed-form exponential of the same generator the first-order
    transition matrix truncates: exp((T_s/2) Omega) = cos(half) I +
    sin(half)/|omega| * Omega.  Reference for transition-matrix accuracy.
    """
    w = np.asarray(body_rates, dtype=float)
    speed = np.linalg.norm(w)
    q = np.asarray(q, dtype=float)
    if speed * sample_period < 1e-15:
        return q.copy()
    half = speed * sample_period / 2.0
    omega = (transition_matrix(w, 2.0) - np.eye(4))  # bare Omega(w)
    out = (math.cos(half) * np.eye(4) + (math.sin(half) / speed) * omega) @ q
    return out / np.linalg.norm(out)
