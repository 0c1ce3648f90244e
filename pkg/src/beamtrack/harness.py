"""Closed-loop simulation: truth flight, sensors, fusion, mechanical
stabilization with dynamic isolation, channel evaluation, and scheduled
electrical refinement; plus CSV/JSON trace export.

Per tick the loop measures, fuses, commands the gimbal and records the
normalized received power of the current analog weights against the
instantaneous satellite direction in the beam frame.  At configured
epochs the electrical stage refines the weights against a channel frozen
at the epoch's geometry.

Randomness is split into independent per-subsystem streams (sensor
noise, channel noise, perturbations) from the master seed, so changing
one noise source leaves the other draws untouched.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import channel as ch
from . import electrical as el
from . import frames, fusion, mechanical, sensors
from .config import ScenarioConfig
from .mechanical import GimbalState

R2D = 180.0 / math.pi

TRACE_SCHEMA = "beamtrack-trace v1"


@dataclass
class TraceRecord:
    t: float
    phase: str  # "mech" per tick, "elec" per optimizer iteration
    yaw_true_deg: float
    pitch_true_deg: float
    roll_true_deg: float
    yaw_est_deg: float
    pitch_est_deg: float
    roll_est_deg: float
    yaw_err_deg: float
    pitch_err_deg: float
    roll_err_deg: float
    azimuth_deg: float
    elevation_deg: float
    polarization_deg: float
    azimuth_err_deg: float
    elevation_err_deg: float
    nrsp: float
    elec_iteration: int
    oracle_queries: int
    rate_clamped: int


TRACE_COLUMNS = [f.name for f in fields(TraceRecord)]


def beam_frame_arrival(
    gimbal: mechanical.GimbalAngles,
    attitude_truth: frames.Attitude,
    sat_dir_ned: np.ndarray,
) -> tuple[float, float]:
    """Arrival direction of the satellite in the actual beam frame.

    Returns the (azimuth, elevation) pair of the channel model: azimuth is
    the polar angle off the array normal, elevation the orientation of the
    offset around it.  Perfect pointing gives azimuth 0.
    """
    to_beam = frames.c_b_t(*gimbal) @ frames.c_n_b(attitude_truth)
    u = to_beam @ sat_dir_ned
    transverse = math.hypot(u[1], u[2])
    azimuth = math.atan2(transverse, u[0])
    elevation = math.atan2(u[2], u[1]) if transverse > 0 else 0.0
    return azimuth, elevation


def build_channel(cfg: ScenarioConfig, azimuth: float, elevation: float) -> np.ndarray:
    """Channel vector for the LOS ray (plus the optional weak second ray)."""
    paths = [ch.PathComponent(azimuth, elevation, cfg.signal.los_gain_abs + 0j, 0.0)]
    if cfg.nlos.gain > 0.0:
        paths.append(
            ch.PathComponent(
                azimuth + cfg.nlos.azimuth_offset,
                elevation + cfg.nlos.elevation_offset,
                cfg.nlos.gain + 0j,
                cfg.nlos.path_length,
            )
        )
    return ch.vec(ch.channel_matrix(cfg.array, paths, cfg.wavelength))


_RUNNERS = {
    "assp": el.run_assp,
    "spsa": el.run_isotropic_spsa,
    "sequential": el.run_sequential_perturbation,
}


def run_simulation(cfg: ScenarioConfig) -> list[TraceRecord]:
    """Run the full closed loop and return the trace.

    One record per sensor tick plus one per electrical iteration at each
    refinement epoch (the ``phase`` column tells them apart).
    """
    master = np.random.SeedSequence(cfg.run.seed)
    sensor_rng, channel_rng, perturb_rng = (
        np.random.default_rng(s) for s in master.spawn(3)
    )
    t_s = cfg.sensors.sample_period
    steps = int(round(cfg.run.duration / t_s))
    euler = mechanical.pointing_euler(cfg.geo)
    sat_dir_ned = frames.c_n_t(*euler).T @ np.array([1.0, 0.0, 0.0])

    # initial filter state from the first sensor epoch
    first = sensors.flight_profile(0.0, cfg.profile)
    pr0 = sensors.accel_to_pitch_roll(
        sensors.accel_measure(first.attitude, cfg.sensors, sensor_rng), cfg.sensors.gravity
    )
    psi0 = sensors.gps_yaw_measure(first.attitude, cfg.sensors, sensor_rng)
    state = fusion.make_filter_state(
        fusion.measurement_quat(psi0, pr0.pitch, pr0.roll),
        cfg.fusion_initial_covariance,
        cfg.fusion_process_noise,
        cfg.fusion_measurement_noise,
    )
    est_attitude = frames.dcm_to_euler(frames.quat_to_dcm(state.q))

    # instant acquisition: gimbal starts on the first stabilization solution
    gimbal = GimbalState(mechanical.stabilization_command(est_attitude, euler))
    phases = np.zeros(cfg.array.size)

    method = cfg.electrical.method
    next_epoch = cfg.electrical.first_epoch
    total_queries = 0
    records: list[TraceRecord] = []

    for k in range(1, steps + 1):
        t = k * t_s
        truth = sensors.flight_profile(t, cfg.profile)
        omega_m = sensors.gyro_measure(truth.body_rates, cfg.sensors, sensor_rng)
        pr = sensors.accel_to_pitch_roll(
            sensors.accel_measure(truth.attitude, cfg.sensors, sensor_rng),
            cfg.sensors.gravity,
        )
        psi_m = sensors.gps_yaw_measure(truth.attitude, cfg.sensors, sensor_rng)
        state, est_attitude = fusion.fuse_step(
            state, omega_m, psi_m, pr.pitch, pr.roll, t_s
        )

        target = mechanical.stabilization_command(est_attitude, euler)
        isolation = mechanical.isolation_rates(gimbal.angles, omega_m)
        gimbal = mechanical.gimbal_step(gimbal, target, isolation, cfg.servo, t_s)

        err_az, err_el = mechanical.pointing_error(gimbal, truth.attitude, euler)
        arrival = beam_frame_arrival(gimbal.angles, truth.attitude, sat_dir_ned)
        h_vec = build_channel(cfg, *arrival)
        nrsp_now = ch.nrsp(phases, h_vec)

        err = (
            frames.wrap_angle(est_attitude.yaw - truth.attitude.yaw),
            est_attitude.pitch - truth.attitude.pitch,
            frames.wrap_angle(est_attitude.roll - truth.attitude.roll),
        )
        records.append(
            TraceRecord(
                t, "mech",
                truth.attitude.yaw * R2D, truth.attitude.pitch * R2D, truth.attitude.roll * R2D,
                est_attitude.yaw * R2D, est_attitude.pitch * R2D, est_attitude.roll * R2D,
                err[0] * R2D, err[1] * R2D, err[2] * R2D,
                gimbal.angles.azimuth * R2D, gimbal.angles.elevation * R2D,
                gimbal.angles.polarization * R2D,
                err_az * R2D, err_el * R2D,
                nrsp_now, 0, total_queries, int(gimbal.rate_clamped),
            )
        )

        if t >= next_epoch - 1e-12:
            next_epoch += cfg.electrical.epoch_period
            oracle = ch.PowerOracle(
                h_vec, cfg.signal.symbol, cfg.signal.noise_power, channel_rng
            )
            phases, trace = _RUNNERS[method](
                phases, oracle, cfg.electrical.params, perturb_rng, cfg.array
            )
            base = records[-1]
            for i in range(len(trace)):
                total_queries_i = total_queries + trace.queries[i]
                records.append(
                    TraceRecord(
                        t, "elec",
                        base.yaw_true_deg, base.pitch_true_deg, base.roll_true_deg,
                        base.yaw_est_deg, base.pitch_est_deg, base.roll_est_deg,
                        base.yaw_err_deg, base.pitch_err_deg, base.roll_err_deg,
                        base.azimuth_deg, base.elevation_deg, base.polarization_deg,
                        base.azimuth_err_deg, base.elevation_err_deg,
                        trace.nrsp[i], trace.k[i], total_queries_i, 0,
                    )
                )
            total_queries += oracle.queries
    return records


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def export_csv(records: list[TraceRecord], path: str | Path) -> None:
    """Write the trace as CSV: schema comment, header, 9-significant-digit
    floats, one line per record."""
    lines = [f"# {TRACE_SCHEMA}", ",".join(TRACE_COLUMNS)]
    for rec in records:
        lines.append(",".join(_format_value(getattr(rec, c)) for c in TRACE_COLUMNS))
    Path(path).write_text("\n".join(lines) + "\n")


def export_json(records: list[TraceRecord], path: str | Path) -> None:
    """JSON mirror of the CSV columns."""
    payload = {
        "schema": TRACE_SCHEMA,
        "columns": TRACE_COLUMNS,
        "rows": [
            [
                float(f"{v:.9g}") if isinstance(v, float) else v
                for v in (getattr(rec, c) for c in TRACE_COLUMNS)
            ]
            for rec in records
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=1) + "\n")


def parse_csv(path: str | Path) -> tuple[list[str], list[list]]:
    """Read back an exported CSV; returns (columns, rows) with typed cells."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or not lines[0].startswith(f"# {TRACE_SCHEMA}"):
        raise ValueError("not a beamtrack trace file")
    columns = lines[1].split(",")
    rows = []
    for line in lines[2:]:
        cells = line.split(",")
        typed = []
        for name, cell in zip(columns, cells):
            if name == "phase":
                typed.append(cell)
            elif name in ("elec_iteration", "oracle_queries", "rate_clamped"):
                typed.append(int(cell))
            else:
                typed.append(float(cell))
        rows.append(typed)
    return columns, rows
