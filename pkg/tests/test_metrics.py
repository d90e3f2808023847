import numpy as np
import pytest
from scipy.integrate import quad

from nfbeamscope.metrics import (
    SegmentationError, isll, lobe_inventory, psll, refine_peak, segment_mainlobe,
    sidelobe_report, to_db,
)
from nfbeamscope.response import FocusPoint, PatternTrace

FOCUS = FocusPoint(0.0, np.pi / 2, 10.0)


def sinc_trace(n=20001, span=4.0):
    x = np.linspace(-span * np.pi, span * np.pi, n)
    return PatternTrace("azimuth", x, np.sinc(x / np.pi) ** 2, FOCUS)


def test_refine_peak_exact_on_parabola():
    x = np.linspace(0, 1, 11)
    y = 3 - (x - 0.537) ** 2
    xp, yp = refine_peak(x, y, int(np.argmax(y)))
    assert xp == pytest.approx(0.537) and yp == pytest.approx(3.0)
    assert refine_peak(x, y, 0) == (0.0, y[0])


def test_sinc_psll_and_segment():
    t = sinc_trace()
    seg = segment_mainlobe(t)
    assert seg.interval[0] == pytest.approx(-np.pi, abs=1e-3)
    assert seg.interval[1] == pytest.approx(np.pi, abs=1e-3)
    hp = seg.half_power_points
    assert hp[1] == pytest.approx(1.3915574, abs=1e-4) and hp[0] == pytest.approx(-hp[1])
    assert psll(t, seg) == pytest.approx(-13.2619, abs=1e-3)
    lobes = lobe_inventory(t)
    assert [lb.side for lb in lobes].count("forelobe") == 3
    assert [lb.side for lb in lobes].count("aftlobe") == 3


def test_isll_against_quadrature():
    t = sinc_trace()
    f = lambda v: np.sinc(v / np.pi) ** 2
    main = quad(f, -np.pi, np.pi)[0]
    side = 2 * quad(f, np.pi, 4 * np.pi, limit=200)[0]
    assert isll(t) == pytest.approx(10 * np.log10(side / main), abs=1e-4)
    f2 = lambda v: np.sinc(v / np.pi) ** 4
    main2 = quad(f2, -np.pi, np.pi)[0]
    side2 = 2 * quad(f2, np.pi, 4 * np.pi, limit=200)[0]
    assert isll(t, integrand="squared") == pytest.approx(10 * np.log10(side2 / main2), abs=1e-4)
    with pytest.raises(ValueError):
        isll(t, integrand="cube")
    with pytest.raises(ValueError):
        isll(t, measure="log")  # negative angles


def test_log_measure_on_range_trace():
    r = np.geomspace(1, 100, 4001)
    u = np.log(r / 10)
    t = PatternTrace("range", r, np.sinc(u) ** 2, FOCUS)
    f = lambda v: np.sinc(v) ** 2
    lo, hi = np.log(1 / 10), np.log(100 / 10)
    expect = (quad(f, lo, -1)[0] + quad(f, 1, hi)[0]) / quad(f, -1, 1)[0]
    assert isll(t) == pytest.approx(10 * np.log10(expect), abs=1e-3)


def test_report_fields_for_angle_trace():
    rep = sidelobe_report(sinc_trace())
    assert rep.isll_convention["measure"] == "native"
    assert rep.r3db_points is None
    assert len(rep.forelobes) == len(rep.aftlobes) == 3
    assert rep.psll_db == pytest.approx(rep.lobes[2].peak_gain_db)


def test_clamped_mainlobe_and_rising_edge():
    x = np.linspace(1, 2, 200)
    g = np.exp(-(x - 1.2) ** 2 * 50) + 0.3 * (x - 1.2).clip(0) ** 3
    t = PatternTrace("range", x, g / g.max(), FOCUS)
    seg = segment_mainlobe(t)
    assert seg.clamped_low
    assert psll(t, seg) == pytest.approx(to_db(t.gains[-1] / t.gains[seg.peak_index]))
    rep = sidelobe_report(t)
    assert rep.clamped == (True, False) and rep.r3db_points is not None


def test_monotone_trace_has_no_sidelobes():
    x = np.linspace(1, 2, 50)
    t = PatternTrace("range", x, np.exp(-x), FOCUS)
    assert psll(t) == -np.inf
    with pytest.raises(SegmentationError):
        sidelobe_report(PatternTrace("range", x[:1], np.ones(1), FOCUS))


def test_nonfinite_rejected():
    x = np.linspace(0, 1, 5)
    with pytest.raises(SegmentationError):
        segment_mainlobe(PatternTrace("azimuth", x, np.array([0, 1, np.nan, 1, 0.0]), FOCUS))


def test_report_dict_round_trip():
    d = sidelobe_report(sinc_trace(2001)).as_dict()
    assert set(d) >= {"psll_db", "isll_db", "lobes", "mainlobe_interval", "isll_convention"}


def test_sinc_half_argument_nulls_and_lobes():
    xi = np.linspace(-10 * np.pi, 10 * np.pi, 40001)
    t = PatternTrace("azimuth", xi, np.sinc(xi / (2 * np.pi)) ** 2, FOCUS)
    seg = segment_mainlobe(t)
    assert seg.interval == pytest.approx((-2 * np.pi, 2 * np.pi), abs=1e-3)
    peaks = [lb.peak_coordinate / np.pi for lb in lobe_inventory(t) if lb.side == "aftlobe"]
    assert peaks[:2] == pytest.approx([2.86, 4.92], abs=0.02)  # near 3 pi, 5 pi


def test_psll_scale_invariant_and_monotone():
    t = sinc_trace()
    scaled = PatternTrace(t.sweep_axis, t.coordinates, 7.5 * t.gains, t.focus)
    assert psll(scaled) == pytest.approx(psll(t), abs=1e-12)
    x = t.coordinates
    keep = np.abs(x) <= 2.2 * np.pi  # drops the stronger... keeps first lobes only partially
    sub = PatternTrace(t.sweep_axis, x[keep], t.gains[keep], t.focus)
    assert psll(t) >= psll(sub)


def test_mirrored_two_lobe_isll_is_zero():
    x = np.linspace(0, 4, 4001)
    g = np.where(x <= 2, np.sin(np.pi * x / 2) ** 2, 0.999 * np.sin(np.pi * (x - 2) / 2) ** 2)
    g[1000] = 1.0
    t = PatternTrace("azimuth", x, g, FOCUS)
    assert isll(t) == pytest.approx(10 * np.log10(0.999), abs=1e-3)
