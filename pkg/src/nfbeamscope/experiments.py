"""Canonical fixed-aperture comparisons: sidelobe table and sum-rate curves."""

import numpy as np

from .closedform import closed_form_gain
from .geometry import build_layout, reference_specs
from .metrics import refine_peak, segment_mainlobe, sidelobe_report, to_db
from .mumimo import monte_carlo_sumrate
from .response import (
    DEFAULT_ANGLE_POINTS,
    DEFAULT_RANGE_POINTS,
    reference_focus,
    trace_axial,
    trace_lateral,
)

GEOMETRIES = ("UCA", "ULA", "UCCA", "USA")

# Published sidelobe levels in dB, (range, angle)
PUBLISHED_PSLL = {
    "UCA": (-7.9, -7.9),
    "ULA": (-8.7, -13.3),
    "UCCA": (-13.4, -17.6),
    "USA": (-17.6, -13.3),
}
PUBLISHED_ISLL = {
    "UCA": (-0.4, 1.9),
    "ULA": (-1.3, -9.6),
    "UCCA": (-7.2, -10.4),
    "USA": (-12.1, -9.6),
}
PSLL_TOL_DB = 0.3
ISLL_TOL_DB = 1.0


def reference_layouts(carrier_frequency=15e9):
    return {name: build_layout(spec) for name, spec in reference_specs(carrier_frequency).items()}


def reference_traces(layout, range_points=DEFAULT_RANGE_POINTS,
                     angle_points=DEFAULT_ANGLE_POINTS, threads=1):
    """Axial trace at ``R_D/40`` on the reference direction, and the azimuth
    trace through the horizontal plane at the same range."""
    axial = trace_axial(layout, reference_focus(layout), points=range_points, threads=threads)
    lateral = trace_lateral(layout, reference_focus(layout, lateral=True),
                            points=angle_points, threads=threads)
    return axial, lateral


def sidelobe_table(layouts=None, range_points=DEFAULT_RANGE_POINTS,
                   angle_points=DEFAULT_ANGLE_POINTS, threads=1):
    """PSLL/ISLL in both domains for each reference geometry.

    Returns ``{name: {"range": SidelobeReport, "angle": SidelobeReport}}``.
    """
    layouts = reference_layouts() if layouts is None else layouts
    out = {}
    for name in GEOMETRIES:
        if name not in layouts:
            continue
        axial, lateral = reference_traces(layouts[name], range_points, angle_points, threads)
        out[name] = {"range": sidelobe_report(axial), "angle": sidelobe_report(lateral)}
    return out


def table_rows(table):
    rows = []
    for name, reps in table.items():
        for i, domain in enumerate(("range", "angle")):
            rep = reps[domain]
            p_ref, i_ref = PUBLISHED_PSLL[name][i], PUBLISHED_ISLL[name][i]
            rows.append({
                "geometry": name,
                "domain": domain,
                "psll_db": rep.psll_db,
                "isll_db": rep.isll_db,
                "published_psll_db": p_ref,
                "published_isll_db": i_ref,
                "psll_within_tol": bool(abs(rep.psll_db - p_ref) <= PSLL_TOL_DB),
                "isll_within_tol": bool(abs(rep.isll_db - i_ref) <= ISLL_TOL_DB),
            })
    return rows


def closed_form_discrepancy(layout, trace, closed=None, sidelobes_per_side=2):
    """Largest dB gap between an exact axial trace and its closed form.

    The mainlobe is compared sample by sample above its half-power level.
    Each of the first ``sidelobes_per_side`` sidelobes on either side is
    compared by its peak level (exact maximum over the lobe against the
    closed-form maximum over the same interval). A lobe cut off by the trace
    edge is compared at its largest sample. Returns ``(worst_db, details)``.
    """
    if closed is None:
        closed = closed_form_gain(layout, trace.focus, trace.coordinates)
    g, c, x = trace.gains, np.asarray(closed), trace.coordinates
    seg = segment_mainlobe(trace)
    main = slice(seg.low_index, seg.high_index + 1)
    body = g[main] >= 0.5 * g[seg.peak_index]
    details = {"mainlobe": float(np.abs(to_db(g[main][body]) - to_db(c[main][body])).max())}
    minima = [i for i in range(1, len(g) - 1) if g[i] < g[i - 1] and g[i] <= g[i + 1]]
    bounds = sorted(set([0, len(g) - 1] + minima))
    lo_b = [b for b in bounds if b <= seg.low_index]
    hi_b = [b for b in bounds if b >= seg.high_index]
    lobes = []
    for k in range(sidelobes_per_side):
        if len(lo_b) >= k + 2:
            lobes.append(("forelobe", k + 1, lo_b[-k - 2], lo_b[-k - 1]))
        if len(hi_b) >= k + 2:
            lobes.append(("aftlobe", k + 1, hi_b[k], hi_b[k + 1]))
    for side, order, a, b in lobes:
        s = slice(a, b + 1)
        i = a + int(np.argmax(g[s]))
        j = a + int(np.argmax(c[s]))
        _, ge = refine_peak(x, g, i)
        _, gc = refine_peak(x, c, j)
        details[f"{side}{order}"] = float(abs(to_db(ge) - to_db(gc)))
    return max(details.values()), details


def sumrate_curves(layouts=None, trials=1000, seed=0, threads=1, **kw):
    layouts = reference_layouts() if layouts is None else layouts
    return {name: monte_carlo_sumrate(layouts[name], trials=trials, seed=seed,
                                      threads=threads, **kw)
            for name in GEOMETRIES if name in layouts}
