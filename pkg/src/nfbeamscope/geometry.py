"""Element layouts for linear, rectangular, circular and concentric-ring arrays.

Coordinate frame (shared by every module):

* ULA elements lie on the y-axis; URA elements fill the yz-plane
  (``n1`` columns along y, ``n2`` rows along z). Boresight is +x.
* UCA and UCCA elements lie in the xy-plane. Boresight is +z; the
  coplanar reference direction is +x.

Directions are written in the usual spherical form
``u = (sin(el) cos(az), sin(el) sin(az), cos(el))`` so ``az = 0, el = pi/2``
is +x and ``el = 0`` is +z.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

SPEED_OF_LIGHT = 3e8  # rounded, so 15 GHz gives lambda = 2 cm exactly


class ArrayKind(str, Enum):
    ULA = "ULA"
    URA = "URA"
    UCA = "UCA"
    UCCA = "UCCA"


@dataclass(frozen=True)
class GeometrySpec:
    """What to build.

    ``counts`` is kind-specific: ``(n,)`` for ULA and UCA, ``(n1, n2)`` for
    URA (width along y, height along z) and ``(rings, outer_count)`` for UCCA.
    ``spacing`` defaults to half a wavelength.
    """

    kind: ArrayKind
    counts: tuple
    carrier_frequency: float = 15e9
    spacing: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ArrayKind(self.kind))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        expected = {ArrayKind.ULA: 1, ArrayKind.UCA: 1, ArrayKind.URA: 2, ArrayKind.UCCA: 2}
        if len(self.counts) != expected[self.kind]:
            raise ValueError(
                f"{self.kind.value} needs {expected[self.kind]} count(s), got {self.counts}"
            )
        if any(c < 1 for c in self.counts):
            raise ValueError(f"element counts must be >= 1, got {self.counts}")
        if not self.carrier_frequency > 0:
            raise ValueError("carrier_frequency must be positive")
        if self.spacing is not None and not self.spacing > 0:
            raise ValueError("spacing must be positive")

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def pitch(self):
        return self.wavelength / 2 if self.spacing is None else self.spacing

    @classmethod
    def ula(cls, n, **kw):
        return cls(ArrayKind.ULA, (n,), **kw)

    @classmethod
    def ura(cls, n1, n2, **kw):
        return cls(ArrayKind.URA, (n1, n2), **kw)

    @classmethod
    def uca(cls, n, **kw):
        return cls(ArrayKind.UCA, (n,), **kw)

    @classmethod
    def ucca(cls, rings, outer_count, **kw):
        return cls(ArrayKind.UCCA, (rings, outer_count), **kw)


@dataclass(frozen=True, eq=False)
class ArrayLayout:
    spec: GeometrySpec
    positions: np.ndarray  # (N, 3), meters, centroid at the origin
    aperture_length: float
    wavelength: float
    boresight: tuple  # (azimuth, elevation) of the array normal
    reference: tuple  # (azimuth, elevation) used for axial studies
    ring_radii: tuple = field(default=())
    ring_counts: tuple = field(default=())

    def __post_init__(self):
        self.positions.setflags(write=False)

    @property
    def kind(self):
        return self.spec.kind

    @property
    def element_count(self):
        return self.positions.shape[0]

    @property
    def pitch(self):
        return self.spec.pitch

    @property
    def rayleigh_distance(self):
        return rayleigh_distance(self)


def ucca_ring_counts(rings, outer_count):
    """Elements per ring, ``round(m/M * N_M)`` for ``m = 1..M``, at least one each.

    Halves round up.
    """
    return [max(1, int(np.floor(m * outer_count / rings + 0.5))) for m in range(1, rings + 1)]


def _ring(count, radius):
    phi = 2 * np.pi * np.arange(count) / count
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), np.zeros(count)])


def _max_pairwise_distance(points):
    if len(points) < 2:
        return 0.0
    if len(points) > 500:
        # the farthest pair is always a pair of hull vertices
        flat = np.ptp(points, axis=0) < 1e-12
        sub = points[:, ~flat]
        if sub.shape[1] == 1:
            return float(np.ptp(sub))
        if sub.shape[1] >= 2:
            try:
                points = points[ConvexHull(sub).vertices]
            except Exception:  # degenerate hull, fall back to all points
                pass
    return float(pdist(points).max())


def build_layout(spec: GeometrySpec) -> ArrayLayout:
    """Centered element positions plus derived aperture quantities."""
    d = spec.pitch
    radii, counts = (), ()
    if spec.kind is ArrayKind.ULA:
        (n,) = spec.counts
        y = (np.arange(n) - (n - 1) / 2) * d
        pos = np.column_stack([np.zeros(n), y, np.zeros(n)])
        bore = ref = (0.0, np.pi / 2)
    elif spec.kind is ArrayKind.URA:
        n1, n2 = spec.counts
        y = (np.arange(n1) - (n1 - 1) / 2) * d
        z = (np.arange(n2) - (n2 - 1) / 2) * d
        yy, zz = np.meshgrid(y, z)
        pos = np.column_stack([np.zeros(n1 * n2), yy.ravel(), zz.ravel()])
        bore = ref = (0.0, np.pi / 2)
    elif spec.kind is ArrayKind.UCA:
        (n,) = spec.counts
        radius = n * d / (2 * np.pi)
        pos = _ring(n, radius)
        radii, counts = (radius,), (n,)
        bore, ref = (0.0, 0.0), (0.0, np.pi / 2)
    else:
        rings, outer = spec.counts
        outer_radius = outer * d / (2 * np.pi)
        counts = tuple(ucca_ring_counts(rings, outer))
        radii = tuple(m / rings * outer_radius for m in range(1, rings + 1))
        pos = np.vstack([_ring(c, r) for c, r in zip(counts, radii)])
        bore = ref = (0.0, 0.0)
    pos = pos - pos.mean(axis=0)
    return ArrayLayout(
        spec=spec,
        positions=pos,
        aperture_length=_max_pairwise_distance(pos),
        wavelength=spec.wavelength,
        boresight=bore,
        reference=ref,
        ring_radii=radii,
        ring_counts=counts,
    )


def rayleigh_distance(layout=None, *, aperture=None, wavelength=None):
    """``2 D^2 / lambda`` for a layout, or for an explicit aperture/wavelength."""
    if layout is not None:
        aperture, wavelength = layout.aperture_length, layout.wavelength
    return 2.0 * aperture**2 / wavelength


def direction(azimuth, elevation):
    """Unit vector(s) for the given angles; broadcasts, last axis is xyz."""
    az = np.asarray(azimuth, dtype=float)
    el = np.asarray(elevation, dtype=float)
    return np.stack(
        np.broadcast_arrays(np.sin(el) * np.cos(az), np.sin(el) * np.sin(az), np.cos(el)),
        axis=-1,
    )


# Canonical configurations with apertures of about 1.2 to 1.3 m at 15 GHz.
def reference_specs(carrier_frequency=15e9):
    return {
        "ULA": GeometrySpec.ula(128, carrier_frequency=carrier_frequency),
        "USA": GeometrySpec.ura(85, 85, carrier_frequency=carrier_frequency),
        "UCA": GeometrySpec.uca(400, carrier_frequency=carrier_frequency),
        "UCCA": GeometrySpec.ucca(40, 400, carrier_frequency=carrier_frequency),
    }
