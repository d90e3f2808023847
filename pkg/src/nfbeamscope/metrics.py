"""Mainlobe/sidelobe segmentation and sidelobe levels of a sampled pattern.

Conventions
-----------
* The mainlobe runs between the first local minima on either side of the
  global peak. If the trace ends before a minimum is reached, the mainlobe is
  clamped to the trace edge and the side is flagged.
* Everything outside the mainlobe is the sidelobe region. PSLL is the largest
  gain there (quadratically refined lobe peaks, plus the raw samples at the
  trace edges) relative to the peak.
* ISLL integrates the gain pattern ``G = |b^H b|^2`` over the sidelobe and
  mainlobe regions. Range traces are integrated over ``ln r``, angle traces
  over the angle in radians. ``integrand="squared"`` and ``measure="native"``
  switch to integrating ``G^2`` over the raw coordinate instead.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .response import PatternTrace

GAIN_FLOOR = 1e-12


class SegmentationError(ArithmeticError):
    """The trace cannot be split into mainlobe and sidelobes."""


def to_db(g):
    return 10 * np.log10(np.maximum(g, GAIN_FLOOR))


def refine_peak(x, y, i):
    """Vertex of the parabola through samples ``i-1, i, i+1``.

    The fit is done in sample-index space and the fractional index mapped back
    to ``x`` linearly. Edge samples are returned unchanged.
    """
    if i <= 0 or i >= len(y) - 1:
        return float(x[i]), float(y[i])
    a, b, c = y[i - 1], y[i], y[i + 1]
    denom = a - 2 * b + c
    if denom >= 0:
        return float(x[i]), float(b)
    off = 0.5 * (a - c) / denom
    off = min(max(off, -1.0), 1.0)
    peak = b - 0.25 * (a - c) * off
    k = i + off
    lo = int(np.floor(k))
    hi = min(lo + 1, len(x) - 1)
    xp = x[lo] + (k - lo) * (x[hi] - x[lo])
    return float(xp), float(peak)


@dataclass(frozen=True)
class Mainlobe:
    peak_index: int
    low_index: int
    high_index: int
    interval: tuple
    half_power_points: tuple
    clamped_low: bool
    clamped_high: bool

    @property
    def has_sidelobes(self):
        return not (self.clamped_low and self.clamped_high)


@dataclass(frozen=True)
class Lobe:
    peak_coordinate: float
    peak_gain_db: float
    side: str  # "forelobe" or "aftlobe"


@dataclass(frozen=True)
class SidelobeReport:
    sweep_axis: str
    focus_coordinate: float
    mainlobe_interval: tuple
    half_power_points: tuple
    clamped: tuple
    psll_db: float
    isll_db: float
    lobes: tuple
    isll_convention: dict

    @property
    def r3db_points(self):
        return self.half_power_points if self.sweep_axis == "range" else None

    @property
    def forelobes(self):
        return [lb for lb in self.lobes if lb.side == "forelobe"]

    @property
    def aftlobes(self):
        return [lb for lb in self.lobes if lb.side == "aftlobe"]

    def as_dict(self):
        return {
            "sweep_axis": self.sweep_axis,
            "focus_coordinate": self.focus_coordinate,
            "mainlobe_interval": list(self.mainlobe_interval),
            "half_power_points": list(self.half_power_points),
            "mainlobe_clamped": {"low": self.clamped[0], "high": self.clamped[1]},
            "psll_db": self.psll_db,
            "isll_db": self.isll_db,
            "isll_convention": dict(self.isll_convention),
            "lobes": [
                {"peak_coordinate": lb.peak_coordinate, "peak_gain_db": lb.peak_gain_db,
                 "side": lb.side}
                for lb in self.lobes
            ],
        }


def _crossing(x, g, i, j, level):
    # linear interpolation between samples i and j, where g crosses level
    if g[i] == g[j]:
        return float(x[i])
    t = (level - g[i]) / (g[j] - g[i])
    return float(x[i] + t * (x[j] - x[i]))


def segment_mainlobe(trace: PatternTrace) -> Mainlobe:
    g = np.asarray(trace.gains, dtype=float)
    x = np.asarray(trace.coordinates, dtype=float)
    if g.size == 0 or not np.all(np.isfinite(g)):
        raise SegmentationError("trace is empty or contains non-finite gains")
    i0 = int(np.argmax(g))
    lo = i0
    while lo > 0 and g[lo - 1] < g[lo]:
        lo -= 1
    hi = i0
    while hi < g.size - 1 and g[hi + 1] < g[hi]:
        hi += 1
    half = 0.5 * g[i0]
    k = i0
    while k > lo and g[k - 1] >= half:
        k -= 1
    left = _crossing(x, g, k - 1, k, half) if k > lo else float(x[lo])
    k = i0
    while k < hi and g[k + 1] >= half:
        k += 1
    right = _crossing(x, g, k, k + 1, half) if k < hi else float(x[hi])
    return Mainlobe(
        peak_index=i0,
        low_index=lo,
        high_index=hi,
        interval=(float(x[lo]), float(x[hi])),
        half_power_points=(left, right),
        clamped_low=lo == 0,
        clamped_high=hi == g.size - 1,
    )


def _sidelobe_candidates(trace, seg):
    g, x = trace.gains, trace.coordinates
    n = g.size
    out = []
    for i in range(1, n - 1):
        if seg.low_index <= i <= seg.high_index:
            continue
        if g[i] > g[i - 1] and g[i] >= g[i + 1]:
            xp, gp = refine_peak(x, g, i)
            out.append((i, xp, gp, True))
    # rising edges that end the trace without a local maximum
    if seg.low_index > 0:
        out.append((0, float(x[0]), float(g[0]), False))
    if seg.high_index < n - 1:
        out.append((n - 1, float(x[-1]), float(g[-1]), False))
    return out


def lobe_inventory(trace: PatternTrace, segment: Mainlobe | None = None):
    """Local maxima outside the mainlobe, tagged by side."""
    seg = segment_mainlobe(trace) if segment is None else segment
    ref = trace.gains[seg.peak_index]
    lobes = []
    for i, xp, gp, is_peak in _sidelobe_candidates(trace, seg):
        if not is_peak:
            continue
        side = "forelobe" if i < seg.low_index else "aftlobe"
        lobes.append(Lobe(xp, float(to_db(gp / ref)), side))
    lobes.sort(key=lambda lb: lb.peak_coordinate)
    return lobes


def psll(trace: PatternTrace, segment: Mainlobe | None = None) -> float:
    """Peak sidelobe level in dB; ``-inf`` when there is no sidelobe region."""
    seg = segment_mainlobe(trace) if segment is None else segment
    cands = _sidelobe_candidates(trace, seg)
    if not cands:
        return -np.inf
    peak = max(c[2] for c in cands)
    return float(to_db(peak / trace.gains[seg.peak_index]))


def default_measure(trace):
    return "log" if trace.sweep_axis == "range" else "native"


def isll(trace: PatternTrace, segment: Mainlobe | None = None, *,
         integrand="gain", measure=None) -> float:
    """Integrated sidelobe level in dB (see module docstring for conventions)."""
    seg = segment_mainlobe(trace) if segment is None else segment
    measure = default_measure(trace) if measure is None else measure
    if integrand not in ("gain", "squared"):
        raise ValueError(f"integrand must be 'gain' or 'squared', got {integrand!r}")
    if measure not in ("log", "native"):
        raise ValueError(f"measure must be 'log' or 'native', got {measure!r}")
    x = np.asarray(trace.coordinates, dtype=float)
    if measure == "log":
        if np.any(x <= 0):
            raise ValueError("log measure needs positive coordinates")
        x = np.log(x)
    y = trace.gains if integrand == "gain" else trace.gains**2
    lo, hi = seg.low_index, seg.high_index
    if hi - lo < 1:
        raise SegmentationError("mainlobe has fewer than two samples")
    main = trapezoid(y[lo:hi + 1], x[lo:hi + 1])
    side = trapezoid(y[:lo + 1], x[:lo + 1]) + trapezoid(y[hi:], x[hi:])
    if side <= 0:
        return -np.inf
    return float(10 * np.log10(side / main))


def sidelobe_report(trace: PatternTrace, *, integrand="gain", measure=None) -> SidelobeReport:
    seg = segment_mainlobe(trace)
    measure = default_measure(trace) if measure is None else measure
    return SidelobeReport(
        sweep_axis=trace.sweep_axis,
        focus_coordinate=float(trace.focus_coordinate),
        mainlobe_interval=seg.interval,
        half_power_points=seg.half_power_points,
        clamped=(seg.clamped_low, seg.clamped_high),
        psll_db=psll(trace, seg),
        isll_db=isll(trace, seg, integrand=integrand, measure=measure),
        lobes=tuple(lobe_inventory(trace, seg)),
        isll_convention={"integrand": integrand, "measure": measure,
                         "mainlobe": "first minima either side of the peak"},
    )
