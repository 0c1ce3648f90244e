"""Coarse beam alignment: geodesic pointing, gimbal stabilization commands,
dynamic isolation of body rates, and a rate-limited proportional servo.

Beam stabilization computes the gimbal angles that point the beam at the
satellite given UAV attitude and geometry.  Dynamic isolation commands
gimbal rates that exactly cancel the projection of UAV body rates into
the beam frame, so the net beam rotation is zero even before the servo
correction acts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import frames
from .frames import Attitude, SingularityError


class NoVisibilityError(ValueError):
    """Raised when the satellite is below the local horizon."""


class PointingEuler(NamedTuple):
    """Beam attitude relative to the NED frame, radians."""

    heading: float  # o: 180 deg + offset toward the satellite meridian
    elevation: float  # e
    polarization: float  # v


class GimbalAngles(NamedTuple):
    azimuth: float
    elevation: float
    polarization: float


class GimbalRates(NamedTuple):
    azimuth: float
    elevation: float
    polarization: float


@dataclass
class GeoConfig:
    uav_latitude: float = math.radians(34.27)
    uav_longitude: float = math.radians(108.95)
    satellite_longitude: float = math.radians(105.5)
    earth_radius: float = 6378e3  # m
    orbit_radius: float = 42164e3  # m, geostationary orbit radius

    def __post_init__(self):
        if not abs(self.uav_latitude) < math.pi / 2:
            raise ValueError("uav_latitude must lie strictly inside +/-90 deg")
        if not self.orbit_radius > self.earth_radius > 0:
            raise ValueError("orbit_radius must exceed earth_radius > 0")


@dataclass
class ServoConfig:
    """Proportional rate servo with saturation and mechanical stops."""

    gain: float = 20.0  # 1/s
    rate_limit: float = math.radians(60.0)  # rad/s per axis
    azimuth_stop: float = math.radians(170.0)  # |azimuth| <= stop; >= pi disables
    elevation_min: float = 0.0
    elevation_max: float = math.radians(85.0)

    def __post_init__(self):
        if self.gain <= 0 or self.rate_limit <= 0:
            raise ValueError("gain and rate_limit must be positive")
        if self.elevation_min >= self.elevation_max:
            raise ValueError("elevation stops are inverted")


@dataclass
class GimbalState:
    angles: GimbalAngles
    rate_clamped: bool = False


def pointing_euler(geo: GeoConfig) -> PointingEuler:
    """Pointing Euler angles of the satellite beam relative to the NED frame.

    Classic geostationary look-angle geometry driven by UAV latitude and the
    longitude difference to the satellite.  The heading keeps its raw
    180-degree offset (no wrapping).

    Raises
    ------
    NoVisibilityError
        If the satellite is below the local horizon.
    """
    lat = geo.uav_latitude
    dlon = geo.uav_longitude - geo.satellite_longitude
    rho = geo.earth_radius / geo.orbit_radius
    cos_psi = math.cos(lat) * math.cos(dlon)
    if cos_psi <= rho:
        raise NoVisibilityError("satellite below horizon for this geometry")
    heading = math.pi + math.atan2(math.tan(dlon), math.sin(lat))
    elevation = math.atan2(cos_psi - rho, math.sqrt(1.0 - cos_psi * cos_psi))
    polarization = math.atan2(math.sin(dlon), math.tan(lat))
    return PointingEuler(heading, elevation, polarization)


def stabilization_command(attitude: Attitude, euler: PointingEuler) -> GimbalAngles:
    """Gimbal angles pointing the beam at the satellite for a given attitude.

    Factors the NED-to-beam map through the body frame: c_b_t(result) @
    c_n_b(attitude) = c_n_t(euler), so coordinates flow n -> b -> t.  A pure
    yaw of the vehicle shifts the azimuth command by the opposite amount.
    """
    c_bt = frames.c_n_t(*euler) @ frames.c_n_b(attitude).T
    return GimbalAngles(*frames.extract_gimbal_angles(c_bt))


def coupled_beam_rate(angles: GimbalAngles, body_rates: np.ndarray) -> np.ndarray:
    """UAV body rates projected into the beam frame."""
    return frames.c_b_t(*angles) @ np.asarray(body_rates, dtype=float)


def monitor_beam_rate(angles: GimbalAngles, rates: GimbalRates) -> np.ndarray:
    """Net beam-frame rate produced by the three gimbal motors."""
    t3 = frames.rot_x(angles.polarization)
    t2 = frames.rot_y(angles.elevation)
    return (
        np.array([rates.polarization, 0.0, 0.0])
        + t3 @ np.array([0.0, rates.elevation, 0.0])
        + t3 @ t2 @ np.array([0.0, 0.0, rates.azimuth])
    )


def isolation_rates(angles: GimbalAngles, body_rates: np.ndarray) -> GimbalRates:
    """Gimbal rates that exactly cancel the coupled beam rate.

    Singular as the elevation approaches +/-90 deg (keyhole), where the
    azimuth axis loses authority over the beam.
    """
    if abs(angles.elevation) >= math.pi / 2 - 1e-6:
        raise SingularityError("elevation too close to +/-90 deg (keyhole)")
    wx, wy, wz = np.asarray(body_rates, dtype=float)
    ca, sa = math.cos(angles.azimuth), math.sin(angles.azimuth)
    tb = math.tan(angles.elevation)
    sec_b = 1.0 / math.cos(angles.elevation)
    return GimbalRates(
        azimuth=-ca * tb * wx - sa * tb * wy - wz,
        elevation=sa * wx - ca * wy,
        polarization=(-ca * wx - sa * wy) * sec_b,
    )


def gimbal_step(
    state: GimbalState,
    target: GimbalAngles,
    isolation: GimbalRates,
    servo: ServoConfig,
    sample_period: float,
) -> GimbalState:
    """Advance the gimbal one tick.

    Commanded rate per axis is the isolation feedforward plus a
    proportional correction toward the stabilization target (shortest
    angular path); rates saturate at the motor limit and angles are held
    inside the mechanical stops.
    """
    current = state.angles
    commanded = [
        isolation.azimuth + servo.gain * frames.wrap_angle(target.azimuth - current.azimuth),
        isolation.elevation + servo.gain * frames.wrap_angle(target.elevation - current.elevation),
        isolation.polarization
        + servo.gain * frames.wrap_angle(target.polarization - current.polarization),
    ]
    clamped = False
    moved = []
    for angle, rate in zip(current, commanded):
        if abs(rate) > servo.rate_limit:
            rate = math.copysign(servo.rate_limit, rate)
            clamped = True
        moved.append(angle + rate * sample_period)
    azimuth = frames.wrap_angle(moved[0])
    if servo.azimuth_stop < math.pi:
        azimuth = min(servo.azimuth_stop, max(-servo.azimuth_stop, azimuth))
    elevation = min(servo.elevation_max, max(servo.elevation_min, moved[1]))
    polarization = frames.wrap_angle(moved[2])
    return replace(
        state, angles=GimbalAngles(azimuth, elevation, polarization), rate_clamped=clamped
    )


def pointing_error(
    state: GimbalState, attitude_truth: Attitude, euler: PointingEuler
) -> tuple[float, float]:
    """Azimuth/elevation error of the actual gimbal against the ideal
    stabilization solution under the truth attitude."""
    ideal = stabilization_command(attitude_truth, euler)
    return (
        frames.wrap_angle(ideal.azimuth - state.angles.azimuth),
        frames.wrap_angle(ideal.elevation - state.angles.elevation),
    )
