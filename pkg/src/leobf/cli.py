"""Command-line entry point: ``leobf {map,doppler,budget,closedform}``.

Exit status is 0 on success, 1 for invalid input and 2 when the
computation or file output fails.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from leobf import __version__
from leobf.config import parse_config
from leobf.coverage import (
    Case,
    enhancement_map,
    fringe_metrics,
    spot_metrics,
)
from leobf.errors import ConfigError, GeometryError, NoFringeError, UnderResolvedError
from leobf.fields import (
    closed_form_intersecting_max,
    closed_form_parallel_max,
    closed_form_perpendicular_max,
    miso_gain,
    ratio_to_db,
)
from leobf.impairments import (
    DopplerPassConfig,
    DopplerSweepConfig,
    doppler_enhancement_sweep,
    first_crossing,
    max_doppler_hz,
)
from leobf.link_budget import LinkBudget, budget_report
from leobf.output import emit_outputs

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError(f"must be >= 2, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--out", metavar="DIR", help="output directory (overrides config)")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")

    parser = _Parser(prog="leobf", description="Distributed LEO downlink beamforming tools.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_map = sub.add_parser("map", parents=[common], help="enhancement map over a ground grid")
    p_map.add_argument("--preset", choices=[c.value for c in Case if c is not Case.CUSTOM])
    p_map.add_argument("--grid-res", type=_positive_int, metavar="N", help="points per side")
    p_map.add_argument("--workers", type=int, default=1, metavar="N",
                       help="threads evaluating grid rows")

    sub.add_parser("doppler", parents=[common], help="enhancement versus frequency offset")

    p_budget = sub.add_parser("budget", parents=[common], help="downlink budget and margin")
    p_budget.add_argument("--enhancement-db", type=float, default=0.0,
                          help="beamforming gain added to the received power")

    p_cf = sub.add_parser("closedform", help="closed-form enhancement maxima")
    p_cf.add_argument("--xi-deg", type=float, default=60.0,
                      help="orbit intersection angle for the intersecting column")
    p_cf.add_argument("--max-n", type=int, default=8, help="largest satellite count")
    return parser


def _request(args):
    text = Path(args.config).read_text() if args.config else "{}"
    return parse_config(
        text,
        preset=getattr(args, "preset", None),
        grid_res=getattr(args, "grid_res", None),
        out_dir=args.out,
    )


def _say(args, msg):
    if not args.quiet:
        print(msg)


def cmd_map(args) -> int:
    req = _request(args)
    cfg = req.scenario
    _say(args, f"case {cfg.case_id.value}: {len(cfg.satellites)} satellite(s), "
               f"{cfg.grid_resolution}x{cfg.grid_resolution} grid over {cfg.grid_side_m:g} m")
    emap = enhancement_map(cfg, offsets=req.offsets, workers=args.workers)
    spot = spot_metrics(emap, cfg.cutoff_db) if cfg.cutoff_db is not None else None
    fringe = None
    if len(cfg.satellites) == 2:
        try:
            fringe = fringe_metrics(emap)
        except NoFringeError:
            fringe = None
    ue_db = float(emap.values_db[emap.center_index])
    link = budget_report(req.budget or LinkBudget(), req.sensitivity, ue_db)
    paths = emit_outputs(req, emap, spot=spot, fringe=fringe, link=link)

    v = emap.values_db
    _say(args, f"max {v.max():.4f} dB, min {v.min():.4f} dB, UE {ue_db:.4f} dB "
               f"(bound {emap.metadata['closed_form_max_db']:.4f} dB)")
    if spot is not None:
        _say(args, f"spot >= {cfg.cutoff_db:g} dB: area {spot.area_m2:.1f} m^2, "
                   f"radius {spot.equivalent_radius_m:.2f} m, diagonal {spot.diagonal_m:.2f} m")
    if fringe is not None:
        _say(args, f"fringes: period {fringe.period_m:.3f} m, bright width "
                   f"{fringe.bright_width_m:.3f} m, orientation "
                   f"{math.degrees(fringe.orientation_rad):.2f} deg")
    _say(args, f"link margin at UE {link['margin_db']:.2f} dB")
    for p in paths:
        _say(args, f"wrote {p}")
    return EXIT_OK


def cmd_doppler(args) -> int:
    req = _request(args)
    if req.sweep is None:
        req = replace(req, sweep=DopplerSweepConfig())
    sweep_cfg = req.sweep
    sweep = doppler_enhancement_sweep(sweep_cfg)
    crossing = first_crossing(sweep, 10.0 * math.log10(2.0))
    paths = emit_outputs(req, None, sweep=sweep, crossing_hz=crossing)
    pass_cfg = DopplerPassConfig(carrier_hz=sweep_cfg.carrier_hz)
    _say(args, f"{len(sweep)} offsets, window {sweep_cfg.window_s:.6g} s "
               f"({sweep_cfg.window_cycles:g} carrier cycles)")
    if crossing is None:
        _say(args, "enhancement never falls below 3.01 dB in the swept range")
    else:
        _say(args, f"3.01 dB crossing at {crossing / 1e3:.2f} kHz")
    _say(args, f"max pass Doppler at {pass_cfg.altitude_km:g} km: "
               f"{max_doppler_hz(pass_cfg) / 1e3:.1f} kHz")
    for p in paths:
        _say(args, f"wrote {p}")
    return EXIT_OK


def cmd_budget(args) -> int:
    req = _request(args)
    b = req.budget or LinkBudget()
    report = budget_report(b, req.sensitivity, args.enhancement_db)
    rows = [
        ("distance_km", b.distance_km),
        ("frequency_hz", b.frequency_hz),
        ("eirp_dbw", b.eirp_dbw),
        ("fspl_db", report["fspl_db"]),
        ("received_power_dbm", report["received_power_dbm"]),
        ("enhancement_db", report["enhancement_db"]),
        ("enhanced_power_dbm", report["enhanced_power_dbm"]),
        ("sensitivity_dbm", report["sensitivity_dbm"]),
        ("margin_db", report["margin_db"]),
    ]
    for name, value in rows:
        print(f"{name:<20} {value:.6g}")
    return EXIT_OK


def cmd_closedform(args) -> int:
    if args.max_n < 2:
        raise ConfigError("--max-n must be >= 2")
    if not 0.0 <= args.xi_deg <= 90.0:
        raise ConfigError("--xi-deg must lie in [0, 90]")
    xi = math.radians(args.xi_deg)
    print(f"{'n':>3} {'parallel_db':>12} {'perpendicular_db':>17} "
          f"{'intersecting_db':>16} {'miso_db':>8}")
    for n in range(2, args.max_n + 1, 2):
        print(f"{n:>3} {ratio_to_db(closed_form_parallel_max(n)):>12.4f} "
              f"{ratio_to_db(closed_form_perpendicular_max(n)):>17.4f} "
              f"{ratio_to_db(closed_form_intersecting_max(n, n // 2, xi)):>16.4f} "
              f"{ratio_to_db(miso_gain(n)):>8.4f}")
    return EXIT_OK


COMMANDS = {
    "map": cmd_map,
    "doppler": cmd_doppler,
    "budget": cmd_budget,
    "closedform": cmd_closedform,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"leobf: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        if getattr(args, "config", None) and exc.filename == args.config:
            print(f"leobf: config not found: {args.config}", file=sys.stderr)
            return EXIT_INVALID
        print(f"leobf: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (GeometryError, UnderResolvedError, ValueError, ArithmeticError, OSError) as exc:
        print(f"leobf: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
