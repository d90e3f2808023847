import numpy as np
import pytest

from nfbeamscope.geometry import GeometrySpec, build_layout
from nfbeamscope.response import (
    FocusPoint, PatternTrace, element_distance, gain_exact, gains_at, reciprocal_grid,
    reference_focus, steering_matrix, steering_vector, trace_axial, trace_lateral,
)


@pytest.fixture(scope="module")
def small():
    return {
        "ULA": build_layout(GeometrySpec.ula(32)),
        "URA": build_layout(GeometrySpec.ura(12, 7)),
        "UCA": build_layout(GeometrySpec.uca(64)),
        "UCCA": build_layout(GeometrySpec.ucca(5, 60)),
    }


def test_focus_validation():
    with pytest.raises(ValueError):
        FocusPoint(0, 0, 0.0)
    f = FocusPoint(0.2, 1.0, 3.0)
    assert np.linalg.norm(f.cartesian) == pytest.approx(3.0)
    assert f.at_range(5.0).range == 5.0


def test_ula_law_of_cosines(small):
    lay = small["ULA"]
    phi, r = 0.37, 2.5
    p = FocusPoint(phi, np.pi / 2, r)
    for n in (0, 7, 31):
        y = lay.positions[n, 1]
        expect = np.sqrt(r * r + y * y - 2 * r * y * np.sin(phi))
        assert element_distance(lay, p, n) == pytest.approx(expect, rel=1e-14)
    with pytest.raises(IndexError):
        element_distance(lay, p, 32)


def test_steering_vector_phases_match_distances(small):
    lay = small["UCA"]
    p = FocusPoint(0.4, 1.1, 1.7)
    b = steering_vector(lay, p).entries
    d = np.array([element_distance(lay, p, n) for n in range(lay.element_count)])
    expect = np.exp(-2j * np.pi / lay.wavelength * (d - p.range)) / np.sqrt(lay.element_count)
    assert np.allclose(b, expect, atol=1e-11)


def test_unit_norm_and_peak(small):
    for lay in small.values():
        f = FocusPoint(0.1, 1.2, 4.0)
        b = steering_vector(lay, f)
        assert np.linalg.norm(b.entries) == pytest.approx(1.0, abs=1e-13)
        assert gain_exact(lay, f, f) == pytest.approx(1.0, abs=1e-12)
        other = FocusPoint(-0.3, 1.0, 2.0)
        assert gain_exact(lay, f, other) == pytest.approx(gain_exact(lay, other, f), abs=1e-14)
        assert 0 <= gain_exact(lay, f, other) <= 1


def test_far_range_is_stable(small):
    lay = small["ULA"]
    b = steering_matrix(lay, [FocusPoint(0.3, np.pi / 2, 1e9)])[0]
    # plane-wave limit: phase = nu * y sin(az)
    y = lay.positions[:, 1]
    expect = np.exp(1j * 2 * np.pi / lay.wavelength * y * np.sin(0.3)) / np.sqrt(lay.element_count)
    assert np.allclose(b, expect, atol=1e-7)


def test_reciprocal_grid():
    r = reciprocal_grid(2.0, 10.0, 9, include=3.3)
    assert r[0] == pytest.approx(2.0) and r[-1] == pytest.approx(10.0)
    assert 3.3 in r and np.all(np.diff(r) > 0)
    inv = 1 / reciprocal_grid(2.0, 10.0, 9)
    assert np.allclose(np.diff(inv), np.diff(inv)[0])
    with pytest.raises(ValueError):
        reciprocal_grid(2.0, 10.0, 0)
    with pytest.raises(ValueError):
        reciprocal_grid(5.0, 1.0, 4)


def test_axial_trace(small):
    lay = small["ULA"]
    f = reference_focus(lay)
    f = f.at_range(0.2 * lay.rayleigh_distance)
    t = trace_axial(lay, f, points=501)
    assert t.sweep_axis == "range"
    assert t.focus_coordinate == f.range
    assert t.gains.max() == pytest.approx(1.0)
    assert t.coordinates[np.argmax(t.gains)] == pytest.approx(f.range)
    with pytest.raises(ValueError):
        trace_axial(lay, f, [0.5 * lay.aperture_length, f.range])
    t2 = trace_axial(lay, f, [0.5 * lay.aperture_length, f.range], allow_near=True)
    assert t2.gains[-1] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        trace_axial(lay, f, [])


def test_lateral_trace(small):
    lay = small["URA"]
    f = reference_focus(lay, lateral=True).at_range(0.3)
    t = trace_lateral(lay, f, points=401)
    assert t.sweep_axis == "azimuth"
    assert t.coordinates[0] == pytest.approx(-np.pi / 2)
    assert t.gains[np.argmin(np.abs(t.coordinates))] == pytest.approx(1.0)
    te = trace_lateral(lay, f, axis="elevation", points=101)
    assert te.focus_coordinate == f.elevation
    with pytest.raises(ValueError):
        trace_lateral(lay, f, axis="range")


def test_threads_identical(small):
    lay = small["UCCA"]
    f = FocusPoint(0.0, 0.0, 0.4)
    pts = np.random.default_rng(1).normal(size=(5000, 3)) + [0, 0, 2]
    a = gains_at(lay, f, pts, threads=1)
    b = gains_at(lay, f, pts, threads=3)
    assert np.array_equal(a, b)


def test_trace_validation():
    f = FocusPoint(0, 0, 1)
    with pytest.raises(ValueError):
        PatternTrace("range", np.array([1.0, 1.0]), np.array([1.0, 1.0]), f, {})
    with pytest.raises(ValueError):
        PatternTrace("depth", np.array([1.0, 2.0]), np.array([1.0, 1.0]), f, {})
