"""Scenario presets built from link distances and angles.

All layouts place RIS-1 at the origin facing +z and keep every node in the
x-z plane. ``radar_angle`` tilts the radar away from RIS-1's normal, RIS-2
sits at the mirror angle (specular reflection at RIS-1), and ``ris2_angle``
tilts RIS-2's normal away from the RIS-2 -> RIS-1 line; the target is placed
at the mirror of RIS-1 about that normal. With both angles zero every link
meets its panel at boresight, the alignment the closed form assumes.
"""

from __future__ import annotations

import math

import numpy as np

from .linkbudget import DEFAULT_WAVELENGTH, NoiseModel, RadarNode, Scenario, Target
from .patterns import PatternModel, db_to_linear
from .ris import RisPanel

# Table 1 operating point
PT_DBW = 30.0
GT_DB = 30.0
RIS_GAIN_DB = 4.0
RIS_HPBW_DEG = 45.0
RADAR_HPBW_DEG = 10.0
ETA = 0.8
RCS = 0.02
R1_NEAR = 250.0
R1_FAR = 1750.0
R_RIS = 50.0
CELLS_PER_SIDE = (10, 19, 28, 37, 46)
PULSES = (1, 40, 80)


def _xz(angle, length=1.0):
    return np.array([math.sin(angle), 0.0, math.cos(angle)]) * length


def _rotate_xz(vec, angle):
    c, s = math.cos(angle), math.sin(angle)
    x, y, z = vec
    return np.array([c * x + s * z, y, -s * x + c * z])


def ris_pattern(gain_db=RIS_GAIN_DB, hpbw_deg=RIS_HPBW_DEG) -> PatternModel:
    return PatternModel.cosine(math.radians(hpbw_deg), db_to_linear(gain_db))


def radar_pattern(gain_db=GT_DB, hpbw_deg=RADAR_HPBW_DEG) -> PatternModel:
    return PatternModel.cosine(math.radians(hpbw_deg), db_to_linear(gain_db))


def paper_layout(
    r1=R1_NEAR,
    r_ris=R_RIS,
    r2=100.0,
    cells=(46, 46),
    *,
    dual=True,
    wavelength=DEFAULT_WAVELENGTH,
    spacing=None,
    radar_angle=0.0,
    ris2_angle=0.0,
    pt_dbw=PT_DBW,
    rcs=RCS,
    eta=ETA,
    ris_gain_db=RIS_GAIN_DB,
    ris_hpbw_deg=RIS_HPBW_DEG,
    radar_pattern_model=None,
    noise=None,
) -> Scenario:
    """Build a one- or two-panel scenario from link distances.

    ``cells`` is an int (same square size for both panels) or a pair of
    per-panel side counts. For ``dual=False`` the target sits ``r2`` from
    RIS-1 in the direction RIS-2 would occupy, so the RIS-1 geometry of the
    two variants is identical.
    """
    if isinstance(cells, int):
        cells = (cells, cells)
    spacing = wavelength / 2.0 if spacing is None else spacing
    pattern = ris_pattern(ris_gain_db, ris_hpbw_deg)
    radar_pos = _xz(radar_angle, r1)
    out_dir = _xz(-radar_angle)
    ris1 = RisPanel.centered((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), cells[0], cells[0],
                             spacing, pattern, eta)
    radar = RadarNode(radar_pos, db_to_linear(pt_dbw),
                      radar_pattern_model if radar_pattern_model is not None else radar_pattern())
    noise = noise if noise is not None else NoiseModel()
    if not dual:
        target = Target(out_dir * r2, rcs)
        return Scenario(radar, (ris1,), target, noise, wavelength)

    c2 = out_dir * r_ris
    back = -out_dir
    n2 = _rotate_xz(back, ris2_angle)
    target_dir = 2.0 * (back @ n2) * n2 - back
    ris2 = RisPanel.centered(c2, n2, cells[1], cells[1], spacing, pattern, eta)
    target = Target(c2 + target_dir * r2, rcs)
    return Scenario(radar, (ris1, ris2), target, noise, wavelength)


def single_from_dual(scenario: Scenario) -> Scenario:
    """Drop RIS-2 and move the target to the same range along RIS-1's outbound ray."""
    if not scenario.is_dual:
        raise ValueError("dual-RIS scenario required")
    p1, p2 = scenario.panels
    r2 = float(np.linalg.norm(scenario.target.position - p2.center))
    direction = p2.center - p1.center
    direction = direction / np.linalg.norm(direction)
    target = type(scenario.target)(p1.center + direction * r2, scenario.target.rcs)
    return scenario.replace(panels=(p1,), target=target)
