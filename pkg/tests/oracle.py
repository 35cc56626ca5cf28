"""Brute-force reference evaluation, deliberately free of numpy and of the
package's geometry/pattern helpers.

Each cell is visited in an explicit double loop. The outbound and return
propagation phases are accumulated as separate phasors, and the received
power is assembled hop by hop from the per-stage constants.
"""

import cmath
import math


def _sub(a, b):
    return [a[i] - b[i] for i in range(3)]


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _norm(a):
    return math.sqrt(_dot(a, a))


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def _cos_pattern(kind, q, cos_theta):
    if cos_theta < 0:
        return 0.0
    if kind == "isotropic":
        return 1.0
    return cos_theta**q


def _panel_cells(panel):
    o = [float(x) for x in panel.frame.origin]
    u = [float(x) for x in panel.frame.u_axis]
    v = [float(x) for x in panel.frame.v_axis]
    cells = {}
    for j in range(1, panel.rows + 1):
        for k in range(1, panel.cols + 1):
            cells[j, k] = [o[i] + (j - 0.5) * panel.rx * u[i] + (k - 0.5) * panel.ry * v[i]
                           for i in range(3)]
    center = [o[i] + 0.5 * panel.rows * panel.rx * u[i] + 0.5 * panel.cols * panel.ry * v[i]
              for i in range(3)]
    return cells, center, _cross(u, v)


def _f(panel, normal, cell, point):
    d = _sub(point, cell)
    return _cos_pattern(panel.pattern.kind, panel.pattern.exponent_q, _dot(d, normal) / _norm(d))


def _radar_f(scenario, center1, point):
    radar = scenario.radar
    pos = [float(x) for x in radar.position]
    if radar.boresight is None:
        b = _sub(center1, pos)
    else:
        b = [float(x) for x in radar.boresight]
    d = _sub(point, pos)
    return _cos_pattern(radar.pattern.kind, radar.pattern.exponent_q, _dot(d, b) / (_norm(d) * _norm(b)))


def _loop_sum(panel, cells, normal, near, far, lam, far_weight, far_power, extra_f):
    """Sum over cells of the round trip near -> cell -> far -> cell -> near.

    ``far_weight`` scales the far-leg phase (1: one pass shared with the
    partner panel, 2: out and back); ``far_power`` is the exponent on the
    far-leg distance in the amplitude.
    """
    acc = 0j
    for j in range(1, panel.rows + 1):
        for k in range(1, panel.cols + 1):
            c = cells[j, k]
            r_near = _norm(_sub(near, c))
            r_far = _norm(_sub(far, c))
            f = extra_f(c) * _f(panel, normal, c, near) * _f(panel, normal, c, far)
            eta = float(panel.eta[j - 1, k - 1])
            phi_out = float(panel.phase_tx[j - 1, k - 1])
            phi_back = float(panel.phase_rx[j - 1, k - 1])
            outbound = cmath.exp(-1j * (2 * math.pi * r_near / lam - phi_out
                                        + far_weight * math.pi * r_far / lam))
            inbound = cmath.exp(-1j * (far_weight * math.pi * r_far / lam
                                       + 2 * math.pi * r_near / lam - phi_back))
            term = math.sqrt(f) * eta / (r_near * r_far**far_power) * outbound * inbound
            acc += term
    return acc


def dual_received_power(scenario):
    lam = scenario.wavelength
    p1, p2 = scenario.panels
    cells1, center1, n1 = _panel_cells(p1)
    cells2, center2, n2 = _panel_cells(p2)
    radar = [float(x) for x in scenario.radar.position]
    target = [float(x) for x in scenario.target.position]

    s1 = _loop_sum(p1, cells1, n1, radar, center2, lam, 1.0, 0.5,
                   lambda c: _radar_f(scenario, center1, c))
    s2 = _loop_sum(p2, cells2, n2, target, center1, lam, 1.0, 0.5, lambda c: 1.0)

    four_pi = 4 * math.pi
    pt = scenario.radar.pt
    gt = scenario.radar.pattern.gain
    g1, g2 = p1.pattern.gain, p2.pattern.gain
    a1, a2 = p1.rx * p1.ry, p2.rx * p2.ry
    # transmitted -> RIS-1 aperture -> RIS-2 aperture -> target -> back: one
    # (4 pi) per spreading stage, lambda^2 from the receive aperture
    forward = pt * gt / four_pi * (g1 * a1) / four_pi * (g2 * a2) / four_pi
    scatter = scenario.target.rcs / four_pi
    ret = (g2 * a2) / four_pi * (g1 * a1) * gt * lam**2 / four_pi**2
    return forward * scatter * ret * abs(s1) ** 4 * abs(s2) ** 4


def single_received_power(scenario):
    lam = scenario.wavelength
    (p1,) = scenario.panels
    cells1, center1, n1 = _panel_cells(p1)
    radar = [float(x) for x in scenario.radar.position]
    target = [float(x) for x in scenario.target.position]
    s = _loop_sum(p1, cells1, n1, radar, target, lam, 2.0, 1.0,
                  lambda c: _radar_f(scenario, center1, c))
    four_pi = 4 * math.pi
    gt = scenario.radar.pattern.gain
    g1, a1 = p1.pattern.gain, p1.rx * p1.ry
    return (scenario.radar.pt * gt / four_pi * g1 * a1 / four_pi * scenario.target.rcs / four_pi
            * g1 * a1 * gt * lam**2 / four_pi**2 * abs(s) ** 4)
