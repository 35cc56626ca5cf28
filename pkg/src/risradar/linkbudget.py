"""Received power, SNR and path loss of RIS-relayed monostatic radar links.

Two evaluation routes are provided for every configuration:

* the element sum, which adds each unit cell's complex contribution using its
  own distances and pattern angles, and
* the closed form, valid under perfect alignment in the far field, which
  replaces each coherent sum by ``cells * amplitude`` at the panel centre.

Dual chain: radar -> RIS-1 -> RIS-2 -> target -> RIS-2 -> RIS-1 -> radar,

    Pr = Pt sigma lambda^2 Gt^2 G1^2 G2^2 A1^2 A2^2 / (4 pi)^7 |sum W1|^4 |sum W2|^4

with ``W1 = sqrt(Frad F F) eta / (r_r sqrt(r_ris)) exp(-i(4 pi r_r/lambda - phi
+ 2 pi r_ris/lambda - phi'))`` and the RIS-2 term ``W2`` built the same way
from the target distance. Single chain: radar -> RIS-1 -> target -> RIS-1 ->
radar with ``V = sqrt(Frad F F) eta / (r_r r_t) exp(-i(4 pi (r_r + r_t)/lambda
- phi - phi'))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .geometry import (
    DegenerateGeometryError,
    as_vec3,
    center_geometry,
    element_geometry,
    unit,
)
from .patterns import PatternModel, evaluate, linear_to_db
from .ris import RisPanel, synthesize_conjugate_phases

BOLTZMANN = 1.380649e-23
FOUR_PI = 4.0 * math.pi
# lambda/2 = 0.1071 m, the cell pitch behind the published far-field column
DEFAULT_WAVELENGTH = 0.2142


@dataclass(frozen=True, eq=False)
class RadarNode:
    position: np.ndarray
    pt: float
    pattern: PatternModel = field(default_factory=PatternModel)
    boresight: np.ndarray | None = None  # None: point at RIS-1 centre

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec3(self.position, "radar position"))
        if self.boresight is not None:
            object.__setattr__(self, "boresight", unit(self.boresight, "boresight"))
        if self.pt < 0:
            raise ValueError("transmit power must be non-negative")


@dataclass(frozen=True, eq=False)
class Target:
    position: np.ndarray
    rcs: float

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec3(self.position, "target position"))
        if self.rcs <= 0:
            raise ValueError("rcs must be positive")


@dataclass(frozen=True)
class NoiseModel:
    t0: float = 290.0
    bandwidth: float = 1e6
    loss: float = 1.0
    pulses: int = 1

    def __post_init__(self):
        if self.t0 <= 0 or self.bandwidth <= 0:
            raise ValueError("t0 and bandwidth must be positive")
        if self.loss < 1.0:
            raise ValueError("loss must be >= 1 (linear)")
        if self.pulses < 1:
            raise ValueError("pulses must be >= 1")

    @property
    def power(self) -> float:
        """Noise power ``k T0 B L`` referred to one pulse."""
        return BOLTZMANN * self.t0 * self.bandwidth * self.loss


@dataclass(frozen=True, eq=False)
class Scenario:
    radar: RadarNode
    panels: tuple[RisPanel, ...]
    target: Target
    noise: NoiseModel = field(default_factory=NoiseModel)
    wavelength: float = DEFAULT_WAVELENGTH

    def __post_init__(self):
        object.__setattr__(self, "panels", tuple(self.panels))
        if len(self.panels) not in (1, 2):
            raise ValueError(f"one or two panels required, got {len(self.panels)}")
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")

    @property
    def is_dual(self) -> bool:
        return len(self.panels) == 2

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def center_geometry(self):
        return center_geometry(
            self.radar.position,
            [(p.frame, p.center) for p in self.panels],
            self.target.position,
        )


@dataclass(frozen=True)
class CascadeResult:
    pr: float
    snr_linear: float
    snr_db: float
    path_loss_db: float
    sum1_mag: float
    sum2_mag: float | None = None


class CascadeStages(NamedTuple):
    p1: float
    p2: float
    p3: float
    p4: float
    p5: float
    p6: float
    p7: float


def compensated_sum(terms) -> complex:
    """Correctly rounded sum of complex terms, independent of term order."""
    flat = np.asarray(terms, dtype=complex).ravel()
    return complex(math.fsum(flat.real.tolist()), math.fsum(flat.imag.tolist()))


def _phasor(cycles):
    # cycles are reduced mod 1 before scaling so long paths keep full precision
    return np.exp(-2j * math.pi * np.mod(cycles, 1.0))


def radar_pattern_factor(scenario: Scenario, points) -> np.ndarray | float:
    """``F_rad`` towards ``points`` given the radar boresight."""
    radar = scenario.radar
    boresight = radar.boresight
    if boresight is None:
        boresight = scenario.panels[0].center - radar.position
        if np.linalg.norm(boresight) == 0:
            raise DegenerateGeometryError("radar coincides with RIS-1 centre")
        boresight = boresight / np.linalg.norm(boresight)
    d = np.asarray(points, dtype=float) - radar.position
    dist = np.linalg.norm(d, axis=-1)
    if np.any(dist == 0.0):
        raise DegenerateGeometryError("radar coincides with a RIS cell")
    cos_t = np.clip((d @ boresight) / dist, -1.0, 1.0)
    return evaluate(radar.pattern, np.arccos(cos_t))


# -- per-cell terms ---------------------------------------------------------

def _ris1_terms(scenario: Scenario):
    p1 = scenario.panels[0]
    cells = p1.cell_centers
    to_radar = element_geometry(cells, scenario.radar.position, p1.frame)
    if scenario.is_dual:
        out = element_geometry(cells, scenario.panels[1].center, p1.frame)
    else:
        out = element_geometry(cells, scenario.target.position, p1.frame)
    f = (radar_pattern_factor(scenario, cells)
         * evaluate(p1.pattern, to_radar.theta)
         * evaluate(p1.pattern, out.theta))
    return to_radar.distance, out.distance, f


def _ris2_terms(scenario: Scenario):
    p1, p2 = scenario.panels
    cells = p2.cell_centers
    to_ris1 = element_geometry(cells, p1.center, p2.frame)
    to_target = element_geometry(cells, scenario.target.position, p2.frame)
    f = evaluate(p2.pattern, to_ris1.theta) * evaluate(p2.pattern, to_target.theta)
    return to_target.distance, to_ris1.distance, f


def _round_trip_terms(panel, r_in, r_out, f, wavelength, outbound_passes, out_power):
    amp = np.sqrt(f) * panel.eta / (r_in * r_out**out_power)
    cycles = (
        np.mod(2.0 * r_in / wavelength, 1.0)
        + np.mod(outbound_passes * r_out / wavelength, 1.0)
        - (panel.phase_tx + panel.phase_rx) / (2.0 * math.pi)
    )
    return amp * _phasor(cycles)


def w_terms_ris1(scenario: Scenario) -> np.ndarray:
    if not scenario.is_dual:
        raise ValueError("W terms need a dual-RIS scenario")
    r_r, r_ris, f = _ris1_terms(scenario)
    return _round_trip_terms(scenario.panels[0], r_r, r_ris, f, scenario.wavelength, 1.0, 0.5)


def w_terms_ris2(scenario: Scenario) -> np.ndarray:
    if not scenario.is_dual:
        raise ValueError("W terms need a dual-RIS scenario")
    r_t, r_ris, f = _ris2_terms(scenario)
    return _round_trip_terms(scenario.panels[1], r_t, r_ris, f, scenario.wavelength, 1.0, 0.5)


def v_terms_single(scenario: Scenario) -> np.ndarray:
    if scenario.is_dual:
        raise ValueError("single-RIS terms need a one-panel scenario")
    r_r, r_t, f = _ris1_terms(scenario)
    return _round_trip_terms(scenario.panels[0], r_r, r_t, f, scenario.wavelength, 2.0, 1.0)


def w_sum_ris1(scenario: Scenario) -> complex:
    """Coherent sum of the RIS-1 round-trip terms (radar side)."""
    return compensated_sum(w_terms_ris1(scenario))


def w_sum_ris2(scenario: Scenario) -> complex:
    """Coherent sum of the RIS-2 round-trip terms (target side)."""
    return compensated_sum(w_terms_ris2(scenario))


def v_sum_single(scenario: Scenario) -> complex:
    return compensated_sum(v_terms_single(scenario))


# -- received power -----------------------------------------------------------

def snr(pr: float, noise: NoiseModel) -> tuple[float, float]:
    """Integrated SNR ``pr * P_N / (k T0 B L)`` as ``(linear, dB)``."""
    if pr < 0:
        raise ValueError("received power must be non-negative")
    lin = pr * noise.pulses / noise.power
    return lin, linear_to_db(lin)


def path_loss_db(pt: float, pr: float) -> float:
    """Round-trip loss ``10 log10(pt / pr)``; ``+inf`` when nothing returns."""
    if pt <= 0:
        raise ValueError("transmit power must be positive")
    if pr <= 0:
        return math.inf
    return 10.0 * math.log10(pt / pr)


def _result(scenario, pr, s1, s2=None) -> CascadeResult:
    lin, db = snr(pr, scenario.noise)
    pt = scenario.radar.pt
    pl = path_loss_db(pt, pr) if pt > 0 else math.inf
    return CascadeResult(pr, lin, db, pl, s1, s2)


def dual_ris_received_power(scenario: Scenario) -> CascadeResult:
    """Element-sum received power for the dual chain, with the current phases."""
    if not scenario.is_dual:
        raise ValueError("dual-RIS scenario required")
    p1, p2 = scenario.panels
    s1 = abs(w_sum_ris1(scenario))
    s2 = abs(w_sum_ris2(scenario))
    lam = scenario.wavelength
    radar = scenario.radar
    pre = (radar.pt * scenario.target.rcs * lam**2 * radar.pattern.gain**2
           * p1.pattern.gain**2 * p2.pattern.gain**2
           * p1.cell_area**2 * p2.cell_area**2 / FOUR_PI**7)
    return _result(scenario, pre * s1**4 * s2**4, s1, s2)


def single_ris_received_power(scenario: Scenario) -> CascadeResult:
    """Element-sum received power for the single chain, with the current phases."""
    if scenario.is_dual:
        raise ValueError("single-RIS scenario required")
    p1 = scenario.panels[0]
    s1 = abs(v_sum_single(scenario))
    lam = scenario.wavelength
    radar = scenario.radar
    pre = (radar.pt * scenario.target.rcs * lam**2 * radar.pattern.gain**2
           * p1.pattern.gain**2 * p1.cell_area**2 / FOUR_PI**5)
    return _result(scenario, pre * s1**4, s1)


def received_power(scenario: Scenario) -> CascadeResult:
    if scenario.is_dual:
        return dual_ris_received_power(scenario)
    return single_ris_received_power(scenario)


# -- closed form ------------------------------------------------------------

def radar_bracket(pt, gt, wavelength, rcs, r1) -> float:
    """Monostatic radar-equation factor ``Pt Gt^2 lambda^2 sigma / ((4 pi)^3 r1^4)``."""
    return pt * gt**2 * wavelength**2 * rcs / (FOUR_PI**3 * r1**4)


def ris_bracket(gain, rx, ry, rows, cols, eta, f_comb, distance) -> float:
    """Per-panel multiplicative factor under perfect alignment.

    ``G^2 rx^2 ry^2 J^4 K^4 eta^4 F^2 / ((4 pi)^2 r^4)``; its dB value is the
    panel's contribution ("RIS effect") to the round-trip SNR.
    """
    return (gain**2 * rx**2 * ry**2 * float(rows) ** 4 * float(cols) ** 4
            * eta**4 * f_comb**2 / (FOUR_PI**2 * distance**4))


def ris_effect_db(n_cells, spacing, gain, eta, distance, f_comb=1.0) -> float:
    return linear_to_db(ris_bracket(gain, spacing, spacing, n_cells, n_cells, eta, f_comb, distance))


def _center_pattern_factors(scenario: Scenario, geo):
    p1 = scenario.panels[0]
    f_rad = radar_pattern_factor(scenario, p1.center)
    out_theta = geo.theta_ris_out if scenario.is_dual else geo.theta_t
    f1 = f_rad * evaluate(p1.pattern, geo.theta_r) * evaluate(p1.pattern, out_theta)
    if not scenario.is_dual:
        return f1, None
    p2 = scenario.panels[1]
    f2 = evaluate(p2.pattern, geo.theta_ris) * evaluate(p2.pattern, geo.theta_t)
    return f1, f2


def closed_form_brackets(scenario: Scenario) -> tuple[float, ...]:
    """Radar bracket followed by one bracket per panel (RIS-1 first).

    Pattern factors are evaluated at the panel centres and amplitudes are
    panel means, which is exact for uniform panels.
    """
    geo = scenario.center_geometry()
    f1, f2 = _center_pattern_factors(scenario, geo)
    radar = scenario.radar
    p1 = scenario.panels[0]
    base = radar_bracket(radar.pt, radar.pattern.gain, scenario.wavelength,
                         scenario.target.rcs, geo.r1)
    b1 = ris_bracket(p1.pattern.gain, p1.rx, p1.ry, p1.rows, p1.cols,
                     float(np.mean(p1.eta)), f1, geo.r2)
    if not scenario.is_dual:
        return base, b1
    p2 = scenario.panels[1]
    b2 = ris_bracket(p2.pattern.gain, p2.rx, p2.ry, p2.rows, p2.cols,
                     float(np.mean(p2.eta)), f2, geo.r_ris)
    return base, b1, b2


def closed_form_max_dual(scenario: Scenario) -> float:
    """Maximum-alignment received power of the dual chain, in watts."""
    if not scenario.is_dual:
        raise ValueError("dual-RIS scenario required")
    return math.prod(closed_form_brackets(scenario))


def closed_form_max_single(scenario: Scenario) -> float:
    if scenario.is_dual:
        raise ValueError("single-RIS scenario required")
    return math.prod(closed_form_brackets(scenario))


def closed_form_result(scenario: Scenario) -> CascadeResult:
    """:class:`CascadeResult` for the closed form; sums are the aligned magnitudes."""
    pr = math.prod(closed_form_brackets(scenario))
    geo = scenario.center_geometry()
    f1, f2 = _center_pattern_factors(scenario, geo)
    p1 = scenario.panels[0]
    eta1 = float(np.mean(p1.eta))
    if scenario.is_dual:
        p2 = scenario.panels[1]
        s1 = p1.rows * p1.cols * eta1 * math.sqrt(f1) / (geo.r1 * math.sqrt(geo.r_ris))
        s2 = (p2.rows * p2.cols * float(np.mean(p2.eta)) * math.sqrt(f2)
              / (geo.r2 * math.sqrt(geo.r_ris)))
        return _result(scenario, pr, s1, s2)
    s1 = p1.rows * p1.cols * eta1 * math.sqrt(f1) / (geo.r1 * geo.r2)
    return _result(scenario, pr, s1)


# -- phasing ----------------------------------------------------------------

def conjugate_phased(scenario: Scenario) -> Scenario:
    """Scenario with every panel phased for maximum coherent return."""
    lam = scenario.wavelength
    p1 = scenario.panels[0]
    r_r, r_out, _ = _ris1_terms(scenario)
    if not scenario.is_dual:
        return scenario.replace(panels=(synthesize_conjugate_phases(p1, r_r, r_out, lam, 2.0),))
    r_t, r_ris2, _ = _ris2_terms(scenario)
    return scenario.replace(panels=(
        synthesize_conjugate_phases(p1, r_r, r_out, lam, 1.0),
        synthesize_conjugate_phases(scenario.panels[1], r_t, r_ris2, lam, 1.0),
    ))


# -- stage-by-stage diagnostics ----------------------------------------------

def intermediate_cascade(scenario: Scenario, ref1=None, ref2=None) -> CascadeStages:
    """Stage powers P1..P7 at one reference cell per panel (default: centre cells).

    Cross-panel distances and angles are taken to the opposite panel's
    reference cell. Power at a cell is the incident power intercepted by its
    area ``rx * ry``; the coherent stages (P3, P5, P7) sum over every cell of
    the radiating panel.
    """
    if not scenario.is_dual:
        raise ValueError("dual-RIS scenario required")
    p1, p2 = scenario.panels
    lam = scenario.wavelength
    radar = scenario.radar
    pt, gt = radar.pt, radar.pattern.gain
    g1, g2 = p1.pattern.gain, p2.pattern.gain
    a1, a2 = p1.cell_area, p2.cell_area
    j0, k0 = ref1 or p1.reference_cell
    m0, n0 = ref2 or p2.reference_cell
    cells1, cells2 = p1.cell_centers, p2.cell_centers
    c1 = cells1[j0 - 1, k0 - 1]
    c2 = cells2[m0 - 1, n0 - 1]
    tgt = scenario.target.position

    # RIS-1 side, all cells
    rr = element_geometry(cells1, radar.position, p1.frame)
    r12 = element_geometry(cells1, c2, p1.frame)
    f_rad = radar_pattern_factor(scenario, cells1)
    F1 = p1.pattern
    fcomb1 = f_rad * evaluate(F1, rr.theta) * evaluate(F1, r12.theta)
    # RIS-2 side, all cells
    r21 = element_geometry(cells2, c1, p2.frame)
    rt = element_geometry(cells2, tgt, p2.frame)
    F2 = p2.pattern
    fcomb2 = evaluate(F2, r21.theta) * evaluate(F2, rt.theta)

    i1 = (j0 - 1, k0 - 1)
    i2 = (m0 - 1, n0 - 1)
    gamma1_sq = float(p1.eta[i1]) ** 2
    gamma2_sq = float(p2.eta[i2]) ** 2

    P1 = pt * gt * f_rad[i1] * evaluate(F1, rr.theta[i1]) * a1 / (FOUR_PI * rr.distance[i1] ** 2)
    P2 = (P1 * gamma1_sq * g1 * evaluate(F1, r12.theta[i1]) * evaluate(F2, r21.theta[i2])
          * a2 / (FOUR_PI * r12.distance[i1] ** 2))

    fwd1 = compensated_sum(
        np.sqrt(fcomb1) * p1.eta / (rr.distance * r12.distance)
        * _phasor((rr.distance + r12.distance) / lam - p1.phase_tx / (2 * math.pi))
    )
    P3 = pt * gt * g1 * a1 * a2 * evaluate(F2, r21.theta[i2]) / FOUR_PI**2 * abs(fwd1) ** 2
    P4 = P3 * gamma2_sq * g2 * evaluate(F2, rt.theta[i2]) / (FOUR_PI * rt.distance[i2] ** 2)

    fwd2 = compensated_sum(
        np.sqrt(fcomb2) * p2.eta / rt.distance
        * _phasor(rt.distance / lam - p2.phase_tx / (2 * math.pi))
    )
    P5 = pt * gt * g1 * g2 * a1 * a2 / FOUR_PI**3 * abs(fwd1) ** 2 * abs(fwd2) ** 2
    P6 = (P5 * scenario.target.rcs / (FOUR_PI * rt.distance[i2] ** 2)
          * evaluate(F2, rt.theta[i2]) * a2 * evaluate(F1, r12.theta[i1]) * a1
          * gamma2_sq * g2 / (FOUR_PI * r21.distance[i2] ** 2) * evaluate(F2, r21.theta[i2]))

    w2 = compensated_sum(
        np.sqrt(fcomb2) * p2.eta / (rt.distance * np.sqrt(r21.distance))
        * _phasor(2 * rt.distance / lam - p2.phase_tx / (2 * math.pi)
                  + r21.distance / lam - p2.phase_rx / (2 * math.pi))
    )
    P7 = (pt * gt * scenario.target.rcs * g1 * g2**2 * a1**2 * a2**2 / FOUR_PI**5
          * evaluate(F1, r12.theta[i1]) * abs(fwd1) ** 2 * abs(w2) ** 4)
    return CascadeStages(*(float(p) for p in (P1, P2, P3, P4, P5, P6, P7)))
