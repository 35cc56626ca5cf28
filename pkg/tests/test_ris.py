import math

import numpy as np
import pytest

from risradar.linkbudget import conjugate_phased, dual_ris_received_power, w_terms_ris1
from risradar.patterns import PatternModel
from risradar.ris import (
    Hop,
    RisPanel,
    quantize_phases,
    reflection_coefficient,
    synthesize_conjugate_phases,
)


@pytest.fixture
def panel():
    return RisPanel.centered((0, 0, 0), (0, 0, 1), 3, 4, 0.1, PatternModel(), eta=0.8)


def test_reflection_zero_phase(panel):
    assert reflection_coefficient(panel, 1, 1) == pytest.approx(0.8 + 0j)


def test_reflection_half_turn(panel):
    p = panel.with_eta(1.0).with_phases(math.pi)
    g = reflection_coefficient(p, 2, 3, Hop.SECOND)
    assert g.real == pytest.approx(-1.0) and abs(g.imag) < 1e-15


def test_reflection_absorbing_cell(panel):
    p = panel.with_eta(0.0).with_phases(1.234)
    assert reflection_coefficient(p, 3, 4, "first") == 0


def test_reflection_per_hop(panel):
    p = panel.with_phases(0.0, math.pi / 2)
    assert reflection_coefficient(p, 1, 1, "first") == pytest.approx(0.8)
    assert reflection_coefficient(p, 1, 1, "second") == pytest.approx(0.8j)


def test_reflection_index_range(panel):
    with pytest.raises(IndexError):
        reflection_coefficient(panel, 4, 1)
    with pytest.raises(IndexError):
        reflection_coefficient(panel, 0, 1)


def test_panel_validation():
    with pytest.raises(ValueError):
        RisPanel.centered((0, 0, 0), (0, 0, 1), 2, 2, 0.1, eta=1.2)
    with pytest.raises(ValueError):
        RisPanel.centered((0, 0, 0), (0, 0, 1), 0, 2, 0.1)


def test_phases_wrapped(panel):
    p = panel.with_phases(-0.5, 7.0)
    assert np.all((p.phase_tx >= 0) & (p.phase_tx < 2 * math.pi))
    assert p.phase_rx[0, 0] == pytest.approx(7.0 - 2 * math.pi)


def test_spacing_warning(panel):
    lam = 0.2142
    with pytest.warns(UserWarning):
        assert not panel.check_spacing(0.1)
    ok = RisPanel.centered((0, 0, 0), (0, 0, 1), 2, 2, lam / 2)
    assert ok.check_spacing(lam)


def test_conjugate_constant_path_gives_equal_phases(panel):
    d = np.full(panel.shape, 12.345)
    p = synthesize_conjugate_phases(panel, d, d * 2, 0.2142)
    assert np.ptp(p.phase_tx) == 0.0
    np.testing.assert_array_equal(p.phase_tx, p.phase_rx)


def test_conjugate_formula(panel):
    rng = np.random.default_rng(0)
    lam = 0.2142
    r_in = rng.uniform(10, 20, panel.shape)
    r_out = rng.uniform(10, 20, panel.shape)
    p = synthesize_conjugate_phases(panel, r_in, r_out, lam)
    expected = np.mod(2 * math.pi * r_in / lam + math.pi * r_out / lam, 2 * math.pi)
    diff = np.angle(np.exp(1j * (p.phase_tx - expected)))
    assert np.max(np.abs(diff)) < 1e-9


def test_conjugate_shape_mismatch(panel):
    with pytest.raises(ValueError):
        synthesize_conjugate_phases(panel, np.ones((4, 3)), np.ones((4, 3)), 0.2)


def test_conjugate_sum_equals_sum_of_magnitudes(oblique_small):
    terms = w_terms_ris1(conjugate_phased(oblique_small))
    assert abs(terms.sum()) == pytest.approx(np.abs(terms).sum(), rel=1e-9)


def test_random_phases_never_beat_conjugate(oblique_small):
    best = dual_ris_received_power(conjugate_phased(oblique_small)).pr
    rng = np.random.default_rng(7)
    p1, p2 = oblique_small.panels
    for _ in range(1000):
        trial = oblique_small.replace(panels=(
            p1.with_phases(rng.uniform(0, 2 * math.pi, p1.shape), rng.uniform(0, 2 * math.pi, p1.shape)),
            p2.with_phases(rng.uniform(0, 2 * math.pi, p2.shape), rng.uniform(0, 2 * math.pi, p2.shape)),
        ))
        assert dual_ris_received_power(trial).pr <= best * (1 + 1e-12)


def test_quantizer_levels(panel):
    p = quantize_phases(panel.with_phases(np.linspace(0, 6.2, 12).reshape(3, 4)), 2)
    levels = np.round(p.phase_tx / (math.pi / 2)).astype(int)
    np.testing.assert_allclose(p.phase_tx, levels * math.pi / 2 % (2 * math.pi), atol=1e-12)


def test_quantization_costs_power(oblique_small):
    ideal = conjugate_phased(oblique_small)
    coarse = ideal.replace(panels=tuple(quantize_phases(p, 1) for p in ideal.panels))
    assert dual_ris_received_power(coarse).pr < dual_ris_received_power(ideal).pr


def test_resized_keeps_center(panel):
    big = panel.resized(7, 9)
    np.testing.assert_allclose(big.center, panel.center, atol=1e-12)
    assert big.shape == (7, 9)
