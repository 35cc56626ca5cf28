"""Parameter sweeps over scenarios, Table 2 regeneration, CSV and SVG output."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .geometry import far_field_distance
from .layout import CELLS_PER_SIDE, ETA, RIS_GAIN_DB, R_RIS, single_from_dual
from .linkbudget import (
    DEFAULT_WAVELENGTH,
    Scenario,
    closed_form_result,
    conjugate_phased,
    received_power,
    ris_effect_db,
)
from .patterns import db_to_linear

AXES = ("ris_target_distance", "cells_per_side", "r1", "r_ris", "pulses")
DISTANCE_AXES = ("ris_target_distance", "r1", "r_ris")
METHODS = ("element", "closed")
CSV_COLUMNS = ("axis_value", "snr_single_db", "snr_dual_db", "pr_dual_w",
               "path_loss_dual_db", "far_field_ok", "error")

# published Table 2: (cells per side, far-field distance m, RIS effect dB)
TABLE2_EXPECTED = (
    (10, 10.7142, -44.62),
    (19, 38.6631, -22.32),
    (28, 83.9664, -8.85),
    (37, 146.6199, 0.84),
    (46, 226.6236, 8.4),
)
TABLE2_FAR_FIELD_TOL = 0.01
TABLE2_EFFECT_TOL = 0.05


@dataclass(frozen=True, eq=False)
class SweepSpec:
    base_scenario: Scenario
    axis: str
    values: Sequence[float]
    compare_single_dual: bool = True
    mark_far_field: bool = True
    method: str = "element"
    n_jobs: int = 1

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        values = tuple(self.values)
        if not values:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.axis in ("cells_per_side", "pulses"):
            if any(int(v) != v or v < 1 for v in values):
                raise ValueError(f"{self.axis} values must be positive integers")
            values = tuple(int(v) for v in values)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    snr_single_db: float | None = None
    snr_dual_db: float | None = None
    pr_dual_w: float | None = None
    path_loss_dual_db: float | None = None
    far_field_ok: tuple[bool, ...] = ()
    far_field_m: tuple[float, ...] = ()
    error: str | None = None


def _move_along(origin, point, new_distance):
    d = point - origin
    norm = np.linalg.norm(d)
    if norm == 0:
        raise ValueError("cannot define a direction from coincident points")
    return origin + d / norm * new_distance


def apply_axis(scenario: Scenario, axis: str, value) -> Scenario:
    """Scenario with one swept parameter changed, everything else rigid."""
    panels = scenario.panels
    if axis == "ris_target_distance":
        pos = _move_along(panels[-1].center, scenario.target.position, value)
        return scenario.replace(target=replace(scenario.target, position=pos))
    if axis == "r1":
        pos = _move_along(panels[0].center, scenario.radar.position, value)
        return scenario.replace(radar=replace(scenario.radar, position=pos))
    if axis == "r_ris":
        if not scenario.is_dual:
            raise ValueError("r_ris sweep needs a dual-RIS scenario")
        c1, c2 = panels[0].center, panels[1].center
        offset = _move_along(c1, c2, value) - c2
        return scenario.replace(
            panels=(panels[0], panels[1].translated(offset)),
            target=replace(scenario.target, position=scenario.target.position + offset),
        )
    if axis == "cells_per_side":
        n = int(value)
        return scenario.replace(panels=tuple(p.resized(n, n) for p in panels))
    if axis == "pulses":
        return scenario.replace(noise=replace(scenario.noise, pulses=int(value)))
    raise ValueError(f"unknown axis {axis!r}")


def _far_field(scenario: Scenario):
    geo = scenario.center_geometry()
    lam = scenario.wavelength
    ffs = tuple(far_field_distance(max(p.rows, p.cols), max(p.rx, p.ry), lam)
                for p in scenario.panels)
    if scenario.is_dual:
        ok = (geo.r1 >= ffs[0] and geo.r_ris >= ffs[0],
              geo.r_ris >= ffs[1] and geo.r2 >= ffs[1])
    else:
        ok = (geo.r1 >= ffs[0] and geo.r2 >= ffs[0],)
    return ok, ffs


def _evaluate(scenario: Scenario, method: str):
    if method == "closed":
        return closed_form_result(scenario)
    return received_power(conjugate_phased(scenario))


def evaluate_point(spec: SweepSpec, value) -> SweepRow:
    try:
        scen = apply_axis(spec.base_scenario, spec.axis, value)
        ok, ffs = _far_field(scen)
        row = {"far_field_ok": ok, "far_field_m": ffs}
        if scen.is_dual:
            res = _evaluate(scen, spec.method)
            row.update(snr_dual_db=res.snr_db, pr_dual_w=res.pr,
                       path_loss_dual_db=res.path_loss_db)
            if spec.compare_single_dual:
                row["snr_single_db"] = _evaluate(single_from_dual(scen), spec.method).snr_db
        else:
            row["snr_single_db"] = _evaluate(scen, spec.method).snr_db
        return SweepRow(axis_value=value, **row)
    except ValueError as exc:  # DegenerateGeometryError included
        return SweepRow(axis_value=value, error=f"{type(exc).__name__}: {exc}")


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every sweep value; rows come back in spec order.

    Each point gets fresh conjugate phases. A point that fails (for example a
    target inside a panel) yields a row carrying the error text.
    """
    if spec.n_jobs > 1:
        with ThreadPoolExecutor(max_workers=spec.n_jobs) as pool:
            return list(pool.map(lambda v: evaluate_point(spec, v), spec.values))
    return [evaluate_point(spec, v) for v in spec.values]


def crossover_summary(rows: Sequence[SweepRow]) -> str:
    """One-line comparison of the dual and single columns."""
    paired = [r for r in rows
              if r.error is None and r.snr_dual_db is not None and r.snr_single_db is not None]
    if not paired:
        return f"{len(rows)} rows; no single/dual comparison"
    far = [r for r in paired if all(r.far_field_ok)]
    basis, label = (far, "far-field") if far else (paired, "evaluated")
    wins = [r.snr_dual_db > r.snr_single_db for r in basis]
    if all(wins):
        verdict = f"dual > single at all {len(basis)} {label} points"
    elif not any(wins):
        verdict = f"dual < single at all {len(basis)} {label} points"
    else:
        first = next(r.axis_value for r, w0, w1 in zip(basis[1:], wins, wins[1:]) if w0 != w1)
        verdict = f"crossover near axis value {first:.6g} ({label} points)"
    return f"{len(rows)} rows; {verdict}"


# -- Table 2 ------------------------------------------------------------------

@dataclass(frozen=True)
class Table2Row:
    config: int
    cells: int
    size_m: int
    far_field_m: float
    effect_db: float


def table2_report(wavelength=DEFAULT_WAVELENGTH, spacing=None, gain_db=RIS_GAIN_DB,
                  eta=ETA, r_ris=R_RIS, cells=CELLS_PER_SIDE) -> list[Table2Row]:
    """Far-field distance and per-panel SNR factor for each square panel size."""
    spacing = wavelength / 2.0 if spacing is None else spacing
    gain = db_to_linear(gain_db)
    return [
        Table2Row(i, n, round(n * spacing), far_field_distance(n, spacing, wavelength),
                  ris_effect_db(n, spacing, gain, eta, r_ris))
        for i, n in enumerate(cells, start=1)
    ]


def table2_mismatches(rows: Sequence[Table2Row]) -> list[str]:
    """Differences from the published table beyond tolerance, as messages."""
    problems = []
    expected = {n: (ff, eff) for n, ff, eff in TABLE2_EXPECTED}
    for row in rows:
        if row.cells not in expected:
            continue
        ff, eff = expected[row.cells]
        if abs(row.far_field_m - ff) > TABLE2_FAR_FIELD_TOL:
            problems.append(f"{row.cells}x{row.cells}: far-field {row.far_field_m:.4f} m, expected {ff}")
        if abs(row.effect_db - eff) > TABLE2_EFFECT_TOL:
            problems.append(f"{row.cells}x{row.cells}: effect {row.effect_db:.3f} dB, expected {eff}")
    return problems


def format_table2(rows: Sequence[Table2Row]) -> str:
    lines = [f"{'config':>6}  {'elements':>9}  {'size':>11}  {'far-field (m)':>13}  {'RIS effect (dB)':>15}"]
    for r in rows:
        lines.append(
            f"{r.config:>6}  {f'{r.cells} x {r.cells}':>9}  {f'{r.size_m} m x {r.size_m} m':>11}  "
            f"{r.far_field_m:>13.4f}  {r.effect_db:>15.2f}"
        )
    return "\n".join(lines)


# -- output -------------------------------------------------------------------

def _num(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{value:.6g}"


def emit_csv(rows: Sequence[SweepRow], destination=None) -> bytes:
    """Serialise rows as UTF-8 CSV with LF endings; optionally write to a path or binary file."""
    if not rows:
        raise ValueError("no rows to write")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        ff = "" if r.error else ("true" if all(r.far_field_ok) else "false")
        writer.writerow([
            _num(r.axis_value), _num(r.snr_single_db), _num(r.snr_dual_db),
            _num(r.pr_dual_w), _num(r.path_loss_dual_db), ff, r.error or "",
        ])
    data = buf.getvalue().encode("utf-8")
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(data)
        else:
            Path(destination).write_bytes(data)
    return data


@dataclass(frozen=True)
class PlotStyle:
    width: int = 720
    height: int = 480
    title: str = "SNR vs sweep parameter"
    x_label: str = "axis value"
    y_label: str = "SNR (dB)"
    log_x: bool = True
    mark_far_field: bool = True
    colors: tuple[str, str] = ("#1f4e9c", "#c0392b")
    margin: tuple[int, int, int, int] = field(default=(50, 20, 40, 70))  # top right bottom left


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def emit_svg_plot(rows: Sequence[SweepRow], styling: PlotStyle | None = None,
                  destination=None) -> bytes:
    """Render dual/single SNR curves as a standalone SVG.

    A series with no finite values is omitted. When ``mark_far_field`` is set,
    each panel's far-field distance inside the x range gets a dashed vertical
    line.
    """
    style = styling or PlotStyle()
    if len(rows) < 2:
        raise ValueError("a plot needs at least two rows")
    xs = np.array([float(r.axis_value) for r in rows])
    log_x = style.log_x and bool(np.all(xs > 0))

    def finite(v):
        return v is not None and math.isfinite(v)

    series = []
    for name, attr, color in (("dual RIS", "snr_dual_db", style.colors[0]),
                              ("single RIS", "snr_single_db", style.colors[1])):
        pts = [(float(r.axis_value), getattr(r, attr)) for r in rows if finite(getattr(r, attr))]
        if pts:
            series.append((name, pts, color))

    all_y = [y for _, pts, _ in series for _, y in pts] or [0.0]
    y_lo, y_hi = math.floor(min(all_y) / 10) * 10, math.ceil(max(all_y) / 10) * 10
    if y_hi == y_lo:
        y_hi = y_lo + 10
    tx = np.log10 if log_x else (lambda v: v)
    x_lo, x_hi = float(tx(xs.min())), float(tx(xs.max()))
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    top, right, bottom, left = style.margin
    pw, ph = style.width - left - right, style.height - top - bottom

    def px(x):
        return left + (float(tx(x)) - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return top + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.width}" height="{style.height}" '
        f'viewBox="0 0 {style.width} {style.height}">',
        f'<rect x="0" y="0" width="{style.width}" height="{style.height}" fill="white"/>',
        f'<text x="{style.width / 2:.1f}" y="24" text-anchor="middle" font-size="15">{style.title}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    step = 10 if (y_hi - y_lo) <= 100 else 20
    for y in range(int(y_lo), int(y_hi) + 1, step):
        out.append(f'<line x1="{left}" y1="{_fmt(py(y))}" x2="{left + pw}" y2="{_fmt(py(y))}" '
                   f'stroke="#dddddd"/>')
        out.append(f'<text x="{left - 6}" y="{_fmt(py(y) + 4)}" text-anchor="end" font-size="11">{y}</text>')
    if log_x:
        ticks = [10.0**e for e in range(math.floor(x_lo), math.ceil(x_hi) + 1)
                 if x_lo - 1e-12 <= e <= x_hi + 1e-12]
    else:
        ticks = list(np.linspace(xs.min(), xs.max(), 5))
    for t in ticks:
        out.append(f'<text x="{_fmt(px(t))}" y="{top + ph + 16}" text-anchor="middle" '
                   f'font-size="11">{t:.6g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{style.height - 8}" text-anchor="middle" '
               f'font-size="12">{style.x_label}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 16 {top + ph / 2:.1f})">{style.y_label}</text>')

    if style.mark_far_field:
        marks = sorted({ff for r in rows for ff in r.far_field_m
                        if xs.min() <= ff <= xs.max()})
        for ff in marks:
            x = _fmt(px(ff))
            out.append(f'<line class="far-field" x1="{x}" y1="{top}" x2="{x}" y2="{top + ph}" '
                       f'stroke="#555555" stroke-dasharray="5,4"/>')

    for i, (name, pts, color) in enumerate(series):
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        ly = top + 16 + 16 * i
        out.append(f'<line x1="{left + 10}" y1="{ly}" x2="{left + 30}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="2"/>')
        out.append(f'<text x="{left + 36}" y="{ly + 4}" font-size="11">{name}</text>')
    out.append("</svg>")
    data = ("\n".join(out) + "\n").encode("utf-8")
    if destination is not None:
        Path(destination).write_bytes(data)
    return data
