"""Dynamic isolation: cancelling vehicle motion before it moves the beam.

First shows the closure identity - the gimbal rates returned by the
isolation formulas exactly cancel the projection of body rates into the
beam frame.  Then runs the closed mechanical loop and compares pointing
error with isolation on and off.
"""

import math

import numpy as np

from beamtrack import frames, fusion, mechanical, sensors
from beamtrack.config import default_scenario
from beamtrack.mechanical import GimbalAngles, GimbalRates, GimbalState

D2R = math.pi / 180.0

rng = np.random.default_rng(0)
worst = 0.0
for _ in range(1000):
    angles = GimbalAngles(
        rng.uniform(-math.pi, math.pi), rng.uniform(-1.4, 1.4), rng.uniform(-math.pi, math.pi)
    )
    omega = rng.uniform(-1, 1, 3)
    rates = mechanical.isolation_rates(angles, omega)
    resid = mechanical.monitor_beam_rate(angles, rates) + mechanical.coupled_beam_rate(
        angles, omega
    )
    worst = max(worst, float(np.abs(resid).max()))
print(f"closure residual over 1000 random states: {worst:.2e} rad/s (exact cancellation)")
print()

cfg = default_scenario()
euler = mechanical.pointing_euler(cfg.geo)
t_s = cfg.sensors.sample_period

for use_isolation in (True, False):
    rng = np.random.default_rng(7)
    first = sensors.flight_profile(0.0, cfg.profile)
    pr0 = sensors.accel_to_pitch_roll(
        sensors.accel_measure(first.attitude, cfg.sensors, rng), cfg.sensors.gravity
    )
    psi0 = sensors.gps_yaw_measure(first.attitude, cfg.sensors, rng)
    state = fusion.make_filter_state(fusion.measurement_quat(psi0, pr0.pitch, pr0.roll))
    est = frames.dcm_to_euler(frames.quat_to_dcm(state.q))
    gimbal = GimbalState(mechanical.stabilization_command(est, euler))
    errs = []
    for k in range(1, int(30.0 / t_s) + 1):
        truth = sensors.flight_profile(k * t_s, cfg.profile)
        omega_m = sensors.gyro_measure(truth.body_rates, cfg.sensors, rng)
        pr = sensors.accel_to_pitch_roll(
            sensors.accel_measure(truth.attitude, cfg.sensors, rng), cfg.sensors.gravity
        )
        psi_m = sensors.gps_yaw_measure(truth.attitude, cfg.sensors, rng)
        state, est = fusion.fuse_step(state, omega_m, psi_m, pr.pitch, pr.roll, t_s)
        target = mechanical.stabilization_command(est, euler)
        iso = (
            mechanical.isolation_rates(gimbal.angles, omega_m)
            if use_isolation
            else GimbalRates(0.0, 0.0, 0.0)
        )
        gimbal = mechanical.gimbal_step(gimbal, target, iso, cfg.servo, t_s)
        errs.append(mechanical.pointing_error(gimbal, truth.attitude, euler))
    e = np.abs(np.array(errs)) / D2R
    label = "isolation + servo" if use_isolation else "servo only       "
    print(
        f"{label}: max pointing error {e.max():.3f} deg, "
        f"within 0.5 deg on {(e.max(axis=1) <= 0.5).mean():.1%} of ticks"
    )
