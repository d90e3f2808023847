import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nfbeamscope.geometry import (
    ArrayKind, GeometrySpec, build_layout, direction, rayleigh_distance, ucca_ring_counts,
)


def test_wavelength_and_pitch():
    spec = GeometrySpec.ula(128)
    assert spec.wavelength == pytest.approx(0.02, rel=1e-15)
    assert spec.pitch == pytest.approx(0.01, rel=1e-15)


def test_reference_apertures(layouts):
    assert layouts["ULA"].aperture_length == pytest.approx(1.27, rel=1e-12)
    assert layouts["ULA"].rayleigh_distance == pytest.approx(161.29, rel=1e-12)
    assert layouts["USA"].aperture_length == pytest.approx(0.84 * np.sqrt(2), rel=1e-12)
    assert layouts["UCA"].aperture_length == pytest.approx(4 / np.pi, rel=1e-6)
    ucca = layouts["UCCA"]
    assert ucca.element_count == 8200
    assert ucca.ring_counts[:3] == (10, 20, 30) and ucca.ring_counts[-1] == 400
    assert ucca.ring_radii[-1] == pytest.approx(2 / np.pi)


def test_layouts_are_centred_and_read_only(layouts):
    for lay in layouts.values():
        assert np.allclose(lay.positions.mean(axis=0), 0, atol=1e-12)
        with pytest.raises(ValueError):
            lay.positions[0, 0] = 1.0


def test_planes(layouts):
    assert np.all(layouts["ULA"].positions[:, [0, 2]] == 0)
    assert np.all(layouts["USA"].positions[:, 0] == 0)
    assert np.allclose(layouts["UCA"].positions[:, 2], 0)
    assert layouts["UCA"].boresight == (0.0, 0.0)
    assert layouts["ULA"].boresight == (0.0, np.pi / 2)


def test_invalid_specs():
    with pytest.raises(ValueError):
        GeometrySpec("ULA", (0,))
    with pytest.raises(ValueError):
        GeometrySpec("URA", (4,))
    with pytest.raises(ValueError):
        GeometrySpec("ULA", (4,), carrier_frequency=-1)
    with pytest.raises(ValueError):
        GeometrySpec("HEX", (4,))



def test_ucca_ring_counts():
    assert ucca_ring_counts(40, 400)[:4] == [10, 20, 30, 40]
    assert ucca_ring_counts(40, 5) == [max(1, round(m / 8 + 1e-9)) for m in range(1, 41)]
    assert min(ucca_ring_counts(40, 5)) == 1


def test_rayleigh_explicit():
    assert rayleigh_distance(aperture=1.0, wavelength=0.02) == pytest.approx(100.0)


def test_direction_is_unit():
    u = direction(np.linspace(-3, 3, 7)[:, None], np.linspace(0, np.pi, 5)[None, :])
    assert u.shape == (7, 5, 3)
    assert np.allclose(np.linalg.norm(u, axis=-1), 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60))
def test_ula_aperture_property(n):
    lay = build_layout(GeometrySpec.ula(n))
    assert lay.aperture_length == pytest.approx((n - 1) * lay.pitch, rel=1e-12)
    assert lay.element_count == n


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.integers(1, 20))
def test_ura_aperture_is_diagonal(n1, n2):
    lay = build_layout(GeometrySpec.ura(n1, n2))
    expect = lay.pitch * np.hypot(n1 - 1, n2 - 1)
    assert lay.aperture_length == pytest.approx(expect, rel=1e-12, abs=1e-15)
    assert lay.kind is ArrayKind.URA


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 300))
def test_uca_pitch_on_circle(n):
    lay = build_layout(GeometrySpec.uca(n))
    gaps = np.linalg.norm(np.diff(lay.positions, axis=0), axis=1)
    arc = 2 * np.pi * lay.ring_radii[0] / n
    assert np.allclose(gaps, 2 * lay.ring_radii[0] * np.sin(np.pi / n))
    assert arc == pytest.approx(lay.pitch)


def test_two_element_ula():
    lay = build_layout(GeometrySpec.ula(2))
    lam = lay.wavelength
    assert lay.aperture_length == pytest.approx(lam / 2)
    assert np.allclose(sorted(lay.positions[:, 1]), [-lam / 4, lam / 4])


def test_rayleigh_degenerate():
    assert rayleigh_distance(aperture=0.0, wavelength=0.02) == 0.0
    assert rayleigh_distance(aperture=1.0, wavelength=1.0) == 2.0
    assert rayleigh_distance(aperture=1.26, wavelength=0.02) == pytest.approx(158.76)


def _same_set(a, b):
    a = np.round(a, 9)
    b = np.round(b, 9)
    return np.array_equal(a[np.lexsort(a.T)], b[np.lexsort(b.T)])


def test_square_array_rotation_invariant():
    p = build_layout(GeometrySpec.ura(9, 9)).positions
    rot = np.column_stack([p[:, 0], -p[:, 2], p[:, 1]])
    assert _same_set(p, rot)


def test_single_ring_ucca_is_uca():
    a = build_layout(GeometrySpec.ucca(1, 37)).positions
    b = build_layout(GeometrySpec.uca(37)).positions
    assert _same_set(a, b)


def test_uca_radius_example():
    lay = build_layout(GeometrySpec.uca(400))
    assert lay.ring_radii[0] == pytest.approx(0.6366, abs=1e-4)
    assert 2 * lay.ring_radii[0] == pytest.approx(1.273, abs=1e-3)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["ULA", "URA", "UCA", "UCCA"]), st.integers(1, 12), st.integers(2, 30))
def test_aperture_is_max_pairwise(kind, a, b):
    counts = {"ULA": (b,), "UCA": (b,), "URA": (a, b), "UCCA": (a, max(b, a))}[kind]
    lay = build_layout(GeometrySpec(kind, counts))
    p = lay.positions
    brute = np.max(np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)) if len(p) > 1 else 0.0
    assert lay.aperture_length == pytest.approx(brute, rel=1e-12, abs=1e-15)


def test_large_aperture_sampled_pairs(layouts):
    lay = layouts["UCCA"]
    rng = np.random.default_rng(0)
    i, j = rng.integers(0, lay.element_count, (2, 20000))
    d = np.linalg.norm(lay.positions[i] - lay.positions[j], axis=1)
    assert d.max() <= lay.aperture_length + 1e-12
