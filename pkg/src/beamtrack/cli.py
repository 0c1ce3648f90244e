"""Command-line front end.

Subcommands:

* ``simulate`` - run the closed-loop scenario and export CSV/JSON traces.
* ``geometry`` - print the pointing solution for a ground location and
  satellite longitude, plus the gimbal solution for a given attitude.
* ``sweep`` - convergence statistics of the electrical methods across a
  swept parameter, one row per value and method.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import experiments, harness, mechanical
from .config import ConfigError, load_scenario
from .frames import Attitude

D2R = math.pi / 180.0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beamtrack",
        description="Blind beam tracking simulator for UAV satellite links.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the closed-loop scenario")
    sim.add_argument("--config", help="scenario file (defaults apply if omitted)")
    sim.add_argument("--seed", type=int, help="override run.seed")
    sim.add_argument("--out", help="output directory (default from config)")

    geo = sub.add_parser("geometry", help="print the pointing solution")
    geo.add_argument("--lat", type=float, default=34.27, help="UAV latitude, deg")
    geo.add_argument("--lon", type=float, default=108.95, help="UAV longitude, deg")
    geo.add_argument("--sat-lon", type=float, default=105.5, help="satellite longitude, deg")
    geo.add_argument("--earth-radius-km", type=float, default=6378.0)
    geo.add_argument("--orbit-radius-km", type=float, default=42164.0)
    geo.add_argument(
        "--attitude",
        default="0,0,0",
        help="yaw,pitch,roll in degrees for the gimbal solution (default level)",
    )

    sw = sub.add_parser("sweep", help="electrical convergence statistics")
    sw.add_argument("--config", help="scenario file providing the base setup")
    sw.add_argument("--param", default="snr_db", help="swept parameter (snr_db)")
    sw.add_argument("--values", required=True, help="comma-separated values")
    sw.add_argument("--seeds", type=int, default=100)
    sw.add_argument(
        "--methods", default="assp,spsa,sequential", help="comma-separated method list"
    )
    sw.add_argument("--offset-deg", type=float, default=0.3, help="initial offset per axis")
    sw.add_argument("--threshold", type=float, default=0.99, help="nrsp threshold")
    sw.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    return parser


def _cmd_simulate(args) -> int:
    if args.config is not None and not Path(args.config).exists():
        print(f"usage: beamtrack simulate [--config FILE] [--seed N] [--out DIR]",
              file=sys.stderr)
        print(f"error: scenario file not found: {args.config}", file=sys.stderr)
        return 2
    cfg = load_scenario(args.config)
    if args.seed is not None:
        cfg.run.seed = args.seed
    out_dir = Path(args.out if args.out is not None else
                   os.environ.get("BEAMTRACK_OUT", cfg.run.output))
    records = harness.run_simulation(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "trace.csv"
    harness.export_csv(records, csv_path)
    harness.export_json(records, out_dir / "trace.json")
    mech = [r for r in records if r.phase == "mech"]
    final_nrsp = records[-1].nrsp
    worst_att = max(
        max(abs(r.yaw_err_deg), abs(r.pitch_err_deg), abs(r.roll_err_deg)) for r in mech
    )
    print(f"ticks = {len(mech)}, electrical rows = {len(records) - len(mech)}")
    print(f"max attitude error = {worst_att:.4f} deg")
    print(f"final nrsp = {final_nrsp:.6f}")
    print(f"trace written to {csv_path}")
    return 0


def _cmd_geometry(args) -> int:
    geo = mechanical.GeoConfig(
        uav_latitude=args.lat * D2R,
        uav_longitude=args.lon * D2R,
        satellite_longitude=args.sat_lon * D2R,
        earth_radius=args.earth_radius_km * 1e3,
        orbit_radius=args.orbit_radius_km * 1e3,
    )
    euler = mechanical.pointing_euler(geo)
    try:
        yaw, pitch, roll = (float(x) * D2R for x in args.attitude.split(","))
    except ValueError:
        print("--attitude must be yaw,pitch,roll in degrees", file=sys.stderr)
        return 2
    gimbal = mechanical.stabilization_command(Attitude(yaw, pitch, roll), euler)
    print(f"heading_deg = {euler.heading / D2R:.4f}")
    print(f"heading_offset_deg = {euler.heading / D2R - 180.0:.4f}")
    print(f"elevation_deg = {euler.elevation / D2R:.4f}")
    print(f"polarization_deg = {euler.polarization / D2R:.4f}")
    print(f"gimbal_azimuth_deg = {gimbal.azimuth / D2R:.4f}")
    print(f"gimbal_elevation_deg = {gimbal.elevation / D2R:.4f}")
    print(f"gimbal_polarization_deg = {gimbal.polarization / D2R:.4f}")
    return 0


def _sweep_task(task):
    method, geom, snr_db, seeds, params, offset_deg, threshold = task
    return experiments.convergence_stats(
        method, geom, snr_db, seeds, params, offset_deg, threshold
    )


def _cmd_sweep(args) -> int:
    cfg = load_scenario(args.config)
    if args.param not in ("snr_db", "signal.snr_db"):
        print(f"unsupported sweep parameter {args.param!r}", file=sys.stderr)
        return 2
    values = [float(v) for v in args.values.split(",") if v.strip()]
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in experiments.METHOD_RUNNERS:
            print(f"unknown method {m!r}", file=sys.stderr)
            return 2
    tasks = [
        (m, cfg.array, v, args.seeds, cfg.electrical.params, args.offset_deg, args.threshold)
        for v in values
        for m in methods
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(t) for t in tasks]
    rows = sorted(
        (
            (task[2], stats.method, stats)
            for task, stats in zip(tasks, results)
        ),
        key=lambda r: (r[0], r[1]),
    )
    header = (
        f"{'snr_db':>8} {'method':>12} {'med_iters':>10} {'reach':>6} "
        f"{'med_nrsp':>9} {'med_queries':>12} {'fit_az_deg':>11} {'fit_el_deg':>11}"
    )
    print(header)
    for value, method, s in rows:
        print(
            f"{value:8.1f} {method:>12} {s.median_iterations:10.1f} "
            f"{s.reach_fraction:6.2f} {s.median_final_nrsp:9.4f} "
            f"{s.median_queries:12.1f} {s.median_fit_azimuth_err_deg:11.4f} "
            f"{s.median_fit_elevation_err_deg:11.4f}"
        )
    return 0


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "geometry":
            return _cmd_geometry(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return 2
    except (ConfigError, mechanical.NoVisibilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures map to exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
