"""Exit criteria, one test per criterion, each at its pinned tolerance."""

import math

import numpy as np
import pytest

import oracle
from conftest import LAMBDA_TABLE
from risradar.cli import main
from risradar.geometry import far_field_distance
from risradar.layout import paper_layout
from risradar.linkbudget import (
    closed_form_max_dual,
    conjugate_phased,
    dual_ris_received_power,
)
from risradar.patterns import db_to_linear
from risradar.linkbudget import ris_effect_db
from risradar.sweep import SweepSpec, run_sweep

CELLS = (10, 19, 28, 37, 46)
FAR_FIELD = (10.7142, 38.6631, 83.9664, 146.6199, 226.6236)
EFFECT = (-44.62, -22.32, -8.85, 0.84, 8.4)


def db(x):
    return 10 * math.log10(x)


def test_ac1_table2_far_field(acceptance_log):
    lam = LAMBDA_TABLE
    got = [far_field_distance(n, lam / 2, lam) for n in CELLS]
    errs = [abs(g - e) for g, e in zip(got, FAR_FIELD)]
    ok = max(errs) <= 0.01
    acceptance_log("AC1 Table 2 far-field (lambda=0.214284, +-0.01 m)", ok,
                   ", ".join(f"{n}:{g:.4f}" for n, g in zip(CELLS, got))
                   + f" max err {max(errs):.4f} m")
    assert ok, f"far-field errors {errs}"


def test_ac2_table2_ris_effect(acceptance_log):
    lam = LAMBDA_TABLE
    got = [ris_effect_db(n, lam / 2, db_to_linear(4.0), 0.8, 50.0) for n in CELLS]
    errs = [abs(g - e) for g, e in zip(got, EFFECT)]
    ok = max(errs) <= 0.05
    acceptance_log("AC2 Table 2 RIS effect (+-0.05 dB)", ok,
                   ", ".join(f"{n}:{g:.3f}" for n, g in zip(CELLS, got))
                   + f" max err {max(errs):.4f} dB")
    assert ok


@pytest.mark.parametrize("angles", [(0.0, 0.0), (math.radians(30), math.radians(15))],
                         ids=["aligned", "oblique"])
def test_ac3_element_sum_vs_closed_form(acceptance_log, angles):
    worst = 0.0
    for n in CELLS:
        ff = far_field_distance(n, 0.2142 / 2, 0.2142)
        for r1 in (3 * ff, max(3 * ff, 1750.0)):
            s = conjugate_phased(paper_layout(r1=r1, r_ris=3 * ff, r2=3 * ff, cells=n,
                                              radar_angle=angles[0], ris2_angle=angles[1]))
            diff = abs(db(dual_ris_received_power(s).pr) - db(closed_form_max_dual(s)))
            worst = max(worst, diff)
    ok = worst <= 0.5
    acceptance_log(f"AC3 element sum vs closed form, {len(CELLS)} sizes, links >= 3x far-field "
                   f"[{'aligned' if angles[0] == 0 else 'oblique'}] (0.5 dB)", ok,
                   f"worst {worst:.4f} dB")
    assert ok


def test_ac4_brute_force_equivalence(acceptance_log):
    rng = np.random.default_rng(2024)
    worst = 0.0
    cases = 0
    for cells in [(1, 1), (2, 3), (5, 5), (8, 8), (8, 6)]:
        for angles in [(0.0, 0.0), (0.45, 0.2)]:
            base = paper_layout(r1=120.0, r_ris=45.0, r2=35.0, cells=cells,
                                radar_angle=angles[0], ris2_angle=angles[1])
            variants = [conjugate_phased(base)]
            p1, p2 = base.panels
            variants.append(base.replace(panels=(
                p1.with_phases(rng.uniform(0, 2 * math.pi, p1.shape),
                               rng.uniform(0, 2 * math.pi, p1.shape)).with_eta(rng.uniform(0, 1, p1.shape)),
                p2.with_phases(rng.uniform(0, 2 * math.pi, p2.shape),
                               rng.uniform(0, 2 * math.pi, p2.shape)).with_eta(rng.uniform(0, 1, p2.shape)),
            )))
            for s in variants:
                ref = oracle.dual_received_power(s)
                got = dual_ris_received_power(s).pr
                worst = max(worst, abs(got / ref - 1))
                cases += 1
    ok = worst <= 1e-10
    acceptance_log("AC4 brute-force P1-P7 chain vs element sum, panels <= 8x8 (1e-10 rel)", ok,
                   f"{cases} cases, worst rel diff {worst:.2e}")
    assert ok


def test_ac5_fig4_crossover(acceptance_log):
    base = paper_layout(r1=250.0, r_ris=50.0, r2=100.0, cells=10)
    closed = run_sweep(SweepSpec(base, "cells_per_side", CELLS, method="closed"))
    deltas = [r.snr_dual_db - r.snr_single_db for r in closed]
    errs = [abs(d - e) for d, e in zip(deltas, EFFECT)]
    element = run_sweep(SweepSpec(base, "cells_per_side", CELLS))
    wins = [r.snr_dual_db > r.snr_single_db for r in element]
    ok = max(errs) <= 0.05 and wins == [False, False, False, True, True] \
        and [d > 0 for d in deltas] == wins
    acceptance_log("AC5 dual-single SNR delta equals RIS effect (0.05 dB); dual wins at 37, 46 only",
                   ok, ", ".join(f"{n}:{d:+.3f}" for n, d in zip(CELLS, deltas))
                   + f"; element-sum dual wins {wins}")
    assert ok


def test_ac6_scaling_laws(acceptance_log):
    results = {}
    # (a) doubling cells per side of one panel
    a = closed_form_max_dual(paper_layout(cells=(10, 19)))
    b = closed_form_max_dual(paper_layout(cells=(20, 19)))
    results["a"] = abs((db(b) - db(a)) - 24.082) <= 1e-3
    # (b) doubling the RIS-target distance
    a = closed_form_max_dual(paper_layout(r2=100.0, cells=19))
    b = closed_form_max_dual(paper_layout(r2=200.0, cells=19))
    results["b"] = abs((db(a) - db(b)) - 12.041) <= 1e-3
    # (c) eta scaling on either panel
    s = conjugate_phased(paper_layout(r1=150, r_ris=40, r2=30, cells=(6, 7), radar_angle=0.3,
                                      ris2_angle=0.1))
    p0 = dual_ris_received_power(s).pr
    ok_c = True
    for scale in (0.5, 0.3, 0.77):
        for idx in (0, 1):
            panels = list(s.panels)
            panels[idx] = panels[idx].with_eta(panels[idx].eta * scale)
            pr = dual_ris_received_power(s.replace(panels=tuple(panels))).pr
            ok_c &= abs(pr / (p0 * scale**4) - 1) <= 1e-12
    results["c"] = ok_c
    # (d) global phase offset
    ok_d = True
    for idx in (0, 1):
        for offset in (0.7, 2.9, -1.3):
            panels = list(s.panels)
            p = panels[idx]
            panels[idx] = p.with_phases(p.phase_tx + offset, p.phase_rx)
            pr = dual_ris_received_power(s.replace(panels=tuple(panels))).pr
            ok_d &= abs(pr / p0 - 1) < 1e-12
    results["d"] = ok_d
    # (e) random phases never beat conjugate phasing on 4x4 panels
    small = paper_layout(r1=80, r_ris=30, r2=20, cells=4, radar_angle=0.4, ris2_angle=0.25)
    best = dual_ris_received_power(conjugate_phased(small)).pr
    rng = np.random.default_rng(99)
    q1, q2 = small.panels
    worst = 0.0
    for _ in range(1000):
        trial = small.replace(panels=(
            q1.with_phases(rng.uniform(0, 2 * math.pi, q1.shape), rng.uniform(0, 2 * math.pi, q1.shape)),
            q2.with_phases(rng.uniform(0, 2 * math.pi, q2.shape), rng.uniform(0, 2 * math.pi, q2.shape)),
        ))
        worst = max(worst, dual_ris_received_power(trial).pr / best)
    results["e"] = worst <= 1.0
    ok = all(results.values())
    acceptance_log("AC6 scaling-law suite (a)-(e)", ok,
                   " ".join(f"({k}){'ok' if v else 'FAIL'}" for k, v in results.items())
                   + f"; best random/conjugate {worst:.3f}")
    assert ok, results


def test_ac7_sweep_determinism(acceptance_log, tmp_path, configs_dir, capsys):
    outputs = []
    for i, jobs in enumerate((1, 4, 1)):
        csv_path, svg_path = tmp_path / f"r{i}.csv", tmp_path / f"r{i}.svg"
        code = main(["sweep", str(configs_dir / "dual_aligned.yaml"), "--axis", "r2",
                     "--from", "10", "--to", "1000", "--points", "30", "--compare-single-dual",
                     "--csv", str(csv_path), "--svg", str(svg_path), "--jobs", str(jobs)])
        assert code == 0
        outputs.append((csv_path.read_bytes(), svg_path.read_bytes()))
    capsys.readouterr()
    ok = outputs[0] == outputs[1] == outputs[2]
    acceptance_log("AC7 sweep CSV/SVG byte-identical across runs and --jobs 1/4", ok,
                   f"{len(outputs[0][0])} CSV bytes, {len(outputs[0][1])} SVG bytes")
    assert ok
