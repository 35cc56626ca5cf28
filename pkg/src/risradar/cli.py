"""Command-line entry point.

Exit codes: 0 success, 1 check failure, 2 config error, 3 geometry error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import ConfigError, load_config, to_scenario
from .geometry import DegenerateGeometryError
from .linkbudget import DEFAULT_WAVELENGTH, closed_form_result, received_power
from .patterns import linear_to_db
from .sweep import (
    DISTANCE_AXES,
    PlotStyle,
    SweepSpec,
    crossover_summary,
    emit_csv,
    emit_svg_plot,
    format_table2,
    run_sweep,
    table2_mismatches,
    table2_report,
)

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_GEOMETRY, EXIT_IO = 0, 1, 2, 3, 4

AXIS_ALIASES = {
    "r2": "ris_target_distance",
    "ris_target_distance": "ris_target_distance",
    "cells": "cells_per_side",
    "cells_per_side": "cells_per_side",
    "r1": "r1",
    "r_ris": "r_ris",
    "pulses": "pulses",
}
AXIS_LABELS = {
    "ris_target_distance": "RIS-target distance (m)",
    "cells_per_side": "unit cells per side",
    "r1": "radar-RIS-1 distance (m)",
    "r_ris": "RIS-1-RIS-2 distance (m)",
    "pulses": "integrated pulses",
}


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load(path, args):
    doc = load_config(path)
    updates = {}
    if getattr(args, "wavelength", None) is not None:
        updates["wavelength_m"] = args.wavelength
    if getattr(args, "pt_dbw", None) is not None:
        updates["radar"] = doc.radar.model_copy(update={"pt_dbw": args.pt_dbw})
    if getattr(args, "pulses", None) is not None:
        updates["noise"] = doc.noise.model_copy(update={"pulses": args.pulses})
    if updates:
        doc = doc.model_copy(update=updates)
    try:
        return to_scenario(doc)
    except DegenerateGeometryError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def cmd_snr(args) -> int:
    scenario = _load(args.config, args)
    res = closed_form_result(scenario) if args.method == "closed" else received_power(scenario)
    s2 = "n/a" if res.sum2_mag is None else f"{res.sum2_mag:.6e}"
    print(f"received power (W):     {res.pr:.6e}")
    print(f"received power (dBW):   {linear_to_db(res.pr):.4f}")
    print(f"SNR (dB):               {res.snr_db:.4f}")
    print(f"path loss (dB):         {res.path_loss_db:.4f}")
    print(f"|sum W RIS-1|:          {res.sum1_mag:.6e}")
    print(f"|sum W RIS-2|:          {s2}")
    return EXIT_OK


def cmd_table2(args) -> int:
    rows = table2_report(wavelength=args.wavelength, gain_db=args.gain_db, eta=args.eta,
                         r_ris=args.r_ris)
    print(format_table2(rows))
    if args.check:
        problems = table2_mismatches(rows)
        if problems:
            for p in problems:
                print(f"MISMATCH {p}")
            return EXIT_CHECK
        print("check: all rows within tolerance")
    return EXIT_OK


def _sweep_values(args, axis):
    if args.values:
        return args.values
    if args.start is None or args.stop is None:
        raise ConfigError("sweep needs --values or both --from and --to")
    log = args.scale == "log" or (args.scale == "auto" and axis in DISTANCE_AXES)
    if log:
        if args.start <= 0:
            raise ConfigError("logarithmic sweep needs --from > 0")
        vals = np.geomspace(args.start, args.stop, args.points)
    else:
        vals = np.linspace(args.start, args.stop, args.points)
    if axis in ("cells_per_side", "pulses"):
        vals = np.unique(np.round(vals).astype(int))
    return [float(v) for v in vals]


def cmd_sweep(args) -> int:
    axis = AXIS_ALIASES[args.axis]
    scenario = _load(args.config, args)
    try:
        spec = SweepSpec(scenario, axis, _sweep_values(args, axis),
                         compare_single_dual=args.compare_single_dual,
                         mark_far_field=not args.no_far_field,
                         method=args.method, n_jobs=args.jobs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = run_sweep(spec)
    try:
        emit_csv(rows, args.csv)
        if args.svg:
            style = PlotStyle(x_label=AXIS_LABELS[axis],
                              log_x=axis in DISTANCE_AXES and args.scale != "linear",
                              mark_far_field=spec.mark_far_field)
            emit_svg_plot(rows, style, args.svg)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write output: {exc}")
    print(crossover_summary(rows))
    return EXIT_OK


def cmd_validate(args) -> int:
    scenario = _load(args.config, args)
    kind = "dual-RIS" if scenario.is_dual else "single-RIS"
    print(f"ok: {kind} config, wavelength {scenario.wavelength} m")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risradar",
        description="Link budget of RIS-relayed monostatic radar in NLoS scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snr", help="evaluate one scenario")
    p.add_argument("config")
    p.add_argument("--pt-dbw", type=float, help="override transmit power (dBW)")
    p.add_argument("--pulses", type=int, help="override integrated pulses")
    p.add_argument("--wavelength", type=float, help="override wavelength (m)")
    p.add_argument("--method", choices=("element", "closed"), default="element")
    p.set_defaults(func=cmd_snr)

    p = sub.add_parser("table2", help="far-field distances and per-panel SNR factor")
    p.add_argument("--check", action="store_true", help="compare with the published values")
    p.add_argument("--wavelength", type=float, default=DEFAULT_WAVELENGTH)
    p.add_argument("--gain-db", type=float, default=4.0)
    p.add_argument("--eta", type=float, default=0.8)
    p.add_argument("--r-ris", type=float, default=50.0)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("sweep", help="sweep one parameter, write CSV (and SVG)")
    p.add_argument("config")
    p.add_argument("--axis", choices=sorted(AXIS_ALIASES), required=True)
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--values", type=float, nargs="+")
    p.add_argument("--scale", choices=("auto", "log", "linear"), default="auto")
    p.add_argument("--csv", required=True, help="CSV output path")
    p.add_argument("--svg", help="SVG output path")
    p.add_argument("--compare-single-dual", action="store_true")
    p.add_argument("--no-far-field", action="store_true", help="omit far-field markers")
    p.add_argument("--method", choices=("element", "closed"), default="element")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--pt-dbw", type=float)
    p.add_argument("--pulses", type=int)
    p.add_argument("--wavelength", type=float)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="schema-check a config")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    except DegenerateGeometryError as exc:
        return _fail(EXIT_GEOMETRY, f"degenerate geometry: {exc}")


if __name__ == "__main__":
    sys.exit(main())
