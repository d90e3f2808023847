"""Exact near-field array response by direct summation over elements.

Nothing here uses a Taylor expansion: element distances are full Euclidean
distances, so these functions are the reference the closed forms in
:mod:`nfbeamscope.closedform` are checked against.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import ArrayLayout, direction

DEFAULT_RANGE_POINTS = 20001
DEFAULT_ANGLE_POINTS = 8001
# lateral sweeps hold elevation in the horizontal plane for every geometry
LATERAL_ELEVATION = np.pi / 2
_CHUNK = 1 << 21  # complex entries per evaluation block


@dataclass(frozen=True)
class FocusPoint:
    azimuth: float
    elevation: float
    range: float

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError(f"range must be positive, got {self.range}")

    @property
    def cartesian(self):
        return self.range * direction(self.azimuth, self.elevation)

    def at_range(self, r):
        return FocusPoint(self.azimuth, self.elevation, r)


@dataclass(frozen=True, eq=False)
class SteeringVector:
    entries: np.ndarray
    focus: FocusPoint

    def __len__(self):
        return len(self.entries)

    def inner(self, other):
        """``b^H c`` with ``self`` conjugated."""
        return complex(np.vdot(self.entries, other.entries))


@dataclass(frozen=True, eq=False)
class PatternTrace:
    """Gain sampled along one coordinate with the others held at the focus.

    ``coordinates`` are ranges in meters (``sweep_axis == "range"``) or angles
    in radians, strictly increasing.
    """

    sweep_axis: str
    coordinates: np.ndarray
    gains: np.ndarray
    focus: FocusPoint
    sampling: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sweep_axis not in ("range", "azimuth", "elevation"):
            raise ValueError(f"unknown sweep axis {self.sweep_axis!r}")
        if len(self.coordinates) != len(self.gains):
            raise ValueError("coordinates and gains differ in length")
        if len(self.coordinates) > 1 and np.any(np.diff(self.coordinates) <= 0):
            raise ValueError("trace coordinates must be strictly increasing")

    @property
    def focus_coordinate(self):
        if self.sweep_axis == "range":
            return self.focus.range
        return getattr(self.focus, self.sweep_axis)

    @property
    def gains_db(self):
        return 10 * np.log10(np.maximum(self.gains, 1e-12))


def _offsets(layout, points):
    """``|p - e_n| - |p|`` for each point (rows) and element (columns).

    Written as ``(|e|^2 - 2 p.e) / (|p - e| + |p|)`` so large ranges do not
    cancel catastrophically.
    """
    pts = np.atleast_2d(points)
    e = layout.positions
    r = np.linalg.norm(pts, axis=1)[:, None]
    cross = pts @ e.T
    e2 = np.einsum("ij,ij->i", e, e)[None, :]
    dist = np.sqrt(np.maximum(r * r - 2 * cross + e2, 0.0))
    return (e2 - 2 * cross) / (dist + r)


def element_distance(layout: ArrayLayout, point: FocusPoint, index: int) -> float:
    if not 0 <= index < layout.element_count:
        raise IndexError(f"element index {index} out of range")
    return float(np.linalg.norm(point.cartesian - layout.positions[index]))


def _response_rows(layout, points):
    nu = 2 * np.pi / layout.wavelength
    return np.exp(-1j * nu * _offsets(layout, points)) / np.sqrt(layout.element_count)


def steering_vector(layout: ArrayLayout, focus: FocusPoint) -> SteeringVector:
    """Unit-norm response with entries ``exp(-j nu (r_n - r)) / sqrt(N)``."""
    return SteeringVector(_response_rows(layout, focus.cartesian)[0], focus)


def steering_matrix(layout: ArrayLayout, foci) -> np.ndarray:
    """Stacked steering vectors, one row per focus point."""
    pts = np.array([f.cartesian for f in foci])
    return _response_rows(layout, pts)


def gain_exact(layout: ArrayLayout, focus: FocusPoint, observe: FocusPoint) -> float:
    """``|b(focus)^H b(observe)|^2``."""
    a = steering_vector(layout, focus)
    b = steering_vector(layout, observe)
    return abs(a.inner(b)) ** 2


def gains_at(layout, focus, points, threads=1):
    """Exact gain of a beam focused at ``focus`` at each Cartesian point.

    Points are processed in independent blocks, so threaded and sequential
    evaluation give bit-identical results.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ref = steering_vector(layout, focus).entries.conj()
    step = max(1, _CHUNK // layout.element_count)
    blocks = [slice(i, i + step) for i in range(0, len(pts), step)]

    def run(sl):
        return np.abs(_response_rows(layout, pts[sl]) @ ref) ** 2

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(sl) for sl in blocks]
    return np.concatenate(parts) if parts else np.empty(0)


def _merge(grid, value):
    # snap a rounding-level neighbour onto ``value`` rather than add a near-duplicate
    i = int(np.argmin(np.abs(grid - value)))
    if abs(grid[i] - value) <= 1e-9 * max(abs(value), float(np.ptp(grid)), 1e-300):
        grid = grid.copy()
        grid[i] = value
        return grid
    return np.union1d(grid, [value])


def reciprocal_grid(r_min, r_max, points=DEFAULT_RANGE_POINTS, include=None):
    """Increasing ranges spaced uniformly in ``1/r``.

    ``include`` (e.g. the focal range) is merged in if it lies inside.
    """
    if points < 1:
        raise ValueError("range grid needs at least one point")
    if not 0 < r_min <= r_max:
        raise ValueError(f"bad range interval [{r_min}, {r_max}]")
    r = np.sort(1.0 / np.linspace(1.0 / r_max, 1.0 / r_min, points))
    if include is not None and r_min <= include <= r_max:
        r = _merge(r, include)
    return r


def default_range_window(layout):
    return 2 * layout.aperture_length, layout.rayleigh_distance


def reference_focus(layout, fraction=1 / 40, lateral=False):
    """Focus at ``fraction * R_D`` along the geometry's reference direction."""
    az, el = (0.0, LATERAL_ELEVATION) if lateral else layout.reference
    return FocusPoint(az, el, fraction * layout.rayleigh_distance)


def trace_axial(
    layout: ArrayLayout,
    focus: FocusPoint,
    ranges=None,
    *,
    points=DEFAULT_RANGE_POINTS,
    allow_near=False,
    threads=1,
) -> PatternTrace:
    """Exact gain versus range at the focus angles.

    By default the window is ``[2D, R_D]`` sampled uniformly in reciprocal
    range. Ranges below ``2D`` raise unless ``allow_near`` is set.
    """
    lo, hi = default_range_window(layout)
    if ranges is None:
        ranges = reciprocal_grid(lo, hi, points, include=focus.range)
    ranges = np.asarray(ranges, dtype=float)
    if ranges.size == 0:
        raise ValueError("range grid is empty")
    if not allow_near and ranges.min() < lo * (1 - 1e-12):
        raise ValueError(
            f"range grid starts at {ranges.min():.4g} m, inside 2D = {lo:.4g} m "
            "(pass allow_near=True to override)"
        )
    pts = ranges[:, None] * direction(focus.azimuth, focus.elevation)[None, :]
    g = gains_at(layout, focus, pts, threads=threads)
    return PatternTrace(
        "range",
        ranges,
        g,
        focus,
        {"spacing": "reciprocal", "points": int(ranges.size),
         "min": float(ranges[0]), "max": float(ranges[-1])},
    )


def angle_grid(lo=-np.pi / 2, hi=np.pi / 2, points=DEFAULT_ANGLE_POINTS, include=None):
    if points < 1:
        raise ValueError("angle grid needs at least one point")
    a = np.linspace(lo, hi, points)
    if include is not None and lo <= include <= hi:
        a = _merge(a, include)
    return a


def trace_lateral(
    layout: ArrayLayout,
    focus: FocusPoint,
    angles=None,
    *,
    axis="azimuth",
    points=DEFAULT_ANGLE_POINTS,
    threads=1,
) -> PatternTrace:
    """Exact gain versus one angle at the focal range.

    The default sweep is azimuth over ``[-pi/2, pi/2]`` (the half-space in
    front of a yz-plane array) at the focus elevation.
    """
    if axis not in ("azimuth", "elevation"):
        raise ValueError(f"axis must be 'azimuth' or 'elevation', got {axis!r}")
    centre = getattr(focus, axis)
    if angles is None:
        angles = angle_grid(centre - np.pi / 2, centre + np.pi / 2, points, include=centre)
    angles = np.asarray(angles, dtype=float)
    if angles.size == 0:
        raise ValueError("angle grid is empty")
    if axis == "azimuth":
        dirs = direction(angles, focus.elevation)
    else:
        dirs = direction(focus.azimuth, angles)
    g = gains_at(layout, focus, focus.range * dirs, threads=threads)
    return PatternTrace(
        axis,
        angles,
        g,
        focus,
        {"spacing": "uniform", "points": int(angles.size),
         "min": float(angles[0]), "max": float(angles[-1])},
    )
