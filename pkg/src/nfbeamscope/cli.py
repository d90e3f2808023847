"""Batch command line front end.

Subcommands::

    nfbeamscope pattern   --config scenario.json --output trace.csv
    nfbeamscope eta-sweep --config scenario.json --output eta.csv
    nfbeamscope sumrate   --config scenario.json --output sumrate.csv
    nfbeamscope table1    --output table1.json

Scenario files are JSON objects; unknown keys are rejected. Exit status is 0
on success, 2 for configuration errors and 3 for numerical failures.
"""

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .closedform import psll_vs_eta_sweep
from .experiments import GEOMETRIES, sidelobe_table, table_rows, PSLL_TOL_DB, ISLL_TOL_DB
from .geometry import GeometrySpec, build_layout, reference_specs
from .metrics import SegmentationError, sidelobe_report
from .mumimo import ANGLE_POLICIES, SNR_AXES, config_hash, monte_carlo_sumrate
from .response import (
    DEFAULT_ANGLE_POINTS,
    DEFAULT_RANGE_POINTS,
    FocusPoint,
    angle_grid,
    default_range_window,
    reciprocal_grid,
    reference_focus,
    trace_axial,
    trace_lateral,
)

SCHEMA = "nf-beamscope/1"
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

log = logging.getLogger("nfbeamscope")


class ConfigError(ValueError):
    pass


_TOP_KEYS = {
    "geometry", "geometries", "focus", "sweep", "grid", "snr_grid_db", "trials", "seed",
    "users", "angle_policy", "snr_axis", "isll", "output", "threads",
}
_GEOMETRY_KEYS = {"kind", "counts", "carrier_frequency", "spacing"}
_FOCUS_KEYS = {"azimuth", "elevation", "range"}
_GRID_KEYS = {"points", "min", "max", "values", "allow_near", "axis"}
_ISLL_KEYS = {"integrand", "measure"}
_OUTPUT_KEYS = {"path", "format"}
FOCUS_PRESETS = ("boresight_over40", "lateral_over40")


@dataclass
class Scenario:
    geometries: list  # [(label, GeometrySpec)]
    sweep: str
    focus: object = "boresight_over40"
    grid: dict = field(default_factory=dict)
    snr_grid_db: list = field(default_factory=lambda: [0.0, 5.0, 10.0, 15.0, 20.0])
    trials: int = 1000
    seed: int = 0
    users: int = 5
    angle_policy: str = "half_space"
    snr_axis: str = "per_antenna"
    isll: dict = field(default_factory=lambda: {"integrand": "gain", "measure": None})
    output_path: str | None = None
    output_format: str = "csv"
    threads: int = 1

    def resolved(self):
        """Plain-data view with every default filled in."""
        return {
            "geometries": [
                {"label": label, "kind": g.kind.value, "counts": list(g.counts),
                 "carrier_frequency": g.carrier_frequency, "spacing": g.pitch}
                for label, g in self.geometries
            ],
            "sweep": self.sweep,
            "focus": self.focus if isinstance(self.focus, str) else dict(self.focus),
            "grid": dict(self.grid),
            "snr_grid_db": list(self.snr_grid_db),
            "trials": self.trials,
            "seed": self.seed,
            "users": self.users,
            "angle_policy": self.angle_policy,
            "snr_axis": self.snr_axis,
            "isll": dict(self.isll),
            "output": {"path": self.output_path, "format": self.output_format},
            "threads": self.threads,
        }


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(extra)}")


def _geometry(obj, where):
    if isinstance(obj, str):
        presets = reference_specs()
        if obj not in presets:
            raise ConfigError(f"{where}: unknown preset {obj!r} (choose from {sorted(presets)})")
        return obj, presets[obj]
    _check_keys(obj, _GEOMETRY_KEYS, where)
    for key in ("kind", "counts"):
        if key not in obj:
            raise ConfigError(f"{where}.{key}: required")
    try:
        spec = GeometrySpec(obj["kind"], tuple(obj["counts"]),
                            carrier_frequency=float(obj.get("carrier_frequency", 15e9)),
                            spacing=obj.get("spacing"))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return spec.kind.value, spec


def _positive_int(value, where):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{where}: must be a positive integer, got {value!r}")
    return value


def parse_scenario(data, sweep=None) -> Scenario:
    _check_keys(data, _TOP_KEYS, "config")
    kind = data.get("sweep", sweep)
    if kind is None:
        raise ConfigError("sweep: required")
    if kind not in ("axial", "lateral", "eta", "sumrate"):
        raise ConfigError(f"sweep: unknown sweep kind {kind!r}")
    if sweep is not None and kind != sweep and not (sweep == "axial" and kind == "lateral"):
        raise ConfigError(f"sweep: {kind!r} does not match this subcommand")

    if "geometry" in data and "geometries" in data:
        raise ConfigError("geometry: give either 'geometry' or 'geometries', not both")
    if "geometries" in data:
        if not isinstance(data["geometries"], list) or not data["geometries"]:
            raise ConfigError("geometries: must be a non-empty list")
        geoms = [_geometry(g, f"geometries[{i}]") for i, g in enumerate(data["geometries"])]
    elif "geometry" in data:
        geoms = [_geometry(data["geometry"], "geometry")]
    elif kind == "eta":
        geoms = []
    else:
        raise ConfigError("geometry: required")

    sc = Scenario(geometries=geoms, sweep=kind)

    if "focus" in data:
        f = data["focus"]
        if isinstance(f, str):
            if f not in FOCUS_PRESETS:
                raise ConfigError(f"focus: unknown preset {f!r}")
        else:
            _check_keys(f, _FOCUS_KEYS, "focus")
            try:
                FocusPoint(float(f["azimuth"]), float(f["elevation"]), float(f["range"]))
            except KeyError as exc:
                raise ConfigError(f"focus.{exc.args[0]}: required") from None
            except ValueError as exc:
                raise ConfigError(f"focus: {exc}") from None
        sc.focus = f

    grid = data.get("grid", {})
    _check_keys(grid, _GRID_KEYS, "grid")
    if "points" in grid:
        _positive_int(grid["points"], "grid.points")
    if "values" in grid:
        vals = grid["values"]
        if not isinstance(vals, list) or not vals:
            raise ConfigError("grid.values: must be a non-empty list")
        try:
            grid["values"] = [float(v) for v in vals]
        except (TypeError, ValueError):
            raise ConfigError("grid.values: must contain numbers") from None
    if "axis" in grid and grid["axis"] not in ("azimuth", "elevation"):
        raise ConfigError("grid.axis: must be 'azimuth' or 'elevation'")
    sc.grid = grid

    if "snr_grid_db" in data:
        s = data["snr_grid_db"]
        if not isinstance(s, list) or not s:
            raise ConfigError("snr_grid_db: must be a non-empty list")
        sc.snr_grid_db = [float(v) for v in s]
    if "trials" in data:
        sc.trials = _positive_int(data["trials"], "trials")
    if "users" in data:
        sc.users = _positive_int(data["users"], "users")
    if "threads" in data:
        sc.threads = _positive_int(data["threads"], "threads")
    if "seed" in data:
        if isinstance(data["seed"], bool) or not isinstance(data["seed"], int) or data["seed"] < 0:
            raise ConfigError("seed: must be a nonnegative integer")
        sc.seed = data["seed"]
    if "angle_policy" in data:
        if data["angle_policy"] not in ANGLE_POLICIES:
            raise ConfigError(f"angle_policy: must be one of {ANGLE_POLICIES}")
        sc.angle_policy = data["angle_policy"]
    if "snr_axis" in data:
        if data["snr_axis"] not in SNR_AXES:
            raise ConfigError(f"snr_axis: must be one of {SNR_AXES}")
        sc.snr_axis = data["snr_axis"]
    if "isll" in data:
        _check_keys(data["isll"], _ISLL_KEYS, "isll")
        sc.isll = {"integrand": "gain", "measure": None, **data["isll"]}
        if sc.isll["integrand"] not in ("gain", "squared"):
            raise ConfigError("isll.integrand: must be 'gain' or 'squared'")
        if sc.isll["measure"] not in (None, "log", "native"):
            raise ConfigError("isll.measure: must be 'log' or 'native'")
    if "output" in data:
        _check_keys(data["output"], _OUTPUT_KEYS, "output")
        sc.output_path = data["output"].get("path")
        sc.output_format = data["output"].get("format", "csv")
        if sc.output_format not in ("csv", "json"):
            raise ConfigError("output.format: must be 'csv' or 'json'")
    return sc


def load_scenario(path, sweep=None):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON ({exc})") from None
    return parse_scenario(data, sweep)


# ---------------------------------------------------------------- writers


def dump_json(obj, path=None):
    text = json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def write_csv(path, header, rows):
    stream = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if path:
            stream.close()


def read_trace_csv(path):
    """Coordinates and gains from a trace CSV written by ``pattern``."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return (np.array([float(r["coordinate"]) for r in rows]),
            np.array([float(r["gain"]) for r in rows]))


def _sidecar(path, suffix):
    return None if path is None else str(Path(path).with_suffix("")) + suffix


def _envelope(kind, sc, **payload):
    return {"schema": SCHEMA, "kind": kind, "version": __version__,
            "config": sc.resolved(), **payload}


# ---------------------------------------------------------------- commands


def _resolve_focus(sc, layout):
    if sc.focus == "boresight_over40" and sc.sweep != "lateral":
        return reference_focus(layout)
    if sc.focus in FOCUS_PRESETS:
        return reference_focus(layout, lateral=True)
    f = sc.focus
    return FocusPoint(float(f["azimuth"]), float(f["elevation"]), float(f["range"]))


def run_pattern(sc: Scenario):
    if sc.sweep not in ("axial", "lateral"):
        raise ConfigError(f"sweep: pattern needs 'axial' or 'lateral', got {sc.sweep!r}")
    if len(sc.geometries) != 1:
        raise ConfigError("geometry: pattern takes exactly one geometry")
    label, spec = sc.geometries[0]
    layout = build_layout(spec)
    focus = _resolve_focus(sc, layout)
    g = sc.grid
    if sc.sweep == "axial":
        if "values" in g:
            ranges = np.asarray(sorted(set(g["values"])))
        else:
            lo, hi = default_range_window(layout)
            lo, hi = g.get("min", lo), g.get("max", hi)
            try:
                ranges = reciprocal_grid(lo, hi, g.get("points", DEFAULT_RANGE_POINTS),
                                         include=focus.range)
            except ValueError as exc:
                raise ConfigError(f"grid: {exc}") from None
        try:
            trace = trace_axial(layout, focus, ranges, allow_near=g.get("allow_near", False),
                                threads=sc.threads)
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from None
    else:
        axis = g.get("axis", "azimuth")
        centre = getattr(focus, axis)
        if "values" in g:
            angles = np.asarray(sorted(set(g["values"])))
        else:
            angles = angle_grid(g.get("min", centre - np.pi / 2), g.get("max", centre + np.pi / 2),
                                g.get("points", DEFAULT_ANGLE_POINTS), include=centre)
        trace = trace_lateral(layout, focus, angles, axis=axis, threads=sc.threads)
    report = sidelobe_report(trace, integrand=sc.isll["integrand"], measure=sc.isll["measure"])

    rows = zip(trace.coordinates, trace.gains, trace.gains_db)
    out = sc.output_path
    if sc.output_format == "csv":
        write_csv(out, ["coordinate", "gain", "gain_db"], rows)
    else:
        dump_json(_envelope("trace", sc, geometry=label, sweep_axis=trace.sweep_axis,
                            sampling=trace.sampling,
                            coordinate=trace.coordinates, gain=trace.gains), out)
    payload = report.as_dict()
    payload.update(geometry=label, element_count=layout.element_count,
                   aperture_length=layout.aperture_length,
                   rayleigh_distance=layout.rayleigh_distance,
                   focus={"azimuth": focus.azimuth, "elevation": focus.elevation,
                          "range": focus.range},
                   sampling=trace.sampling, trace_file=out)
    report_path = _sidecar(out, ".report.json")
    dump_json(_envelope("sidelobe_report", sc, report=payload), report_path)
    return report


def run_eta_sweep(sc: Scenario):
    g = sc.grid
    if "values" in g:
        etas = g["values"]
    else:
        n = g.get("points", 100)
        lo, hi = g.get("min", 0.01), g.get("max", 1.0)
        etas = np.linspace(lo, hi, n).tolist()
    if any(not 0 < e <= 1 for e in etas):
        raise ConfigError("grid: eta values must lie in (0, 1]")
    rows = psll_vs_eta_sweep(etas)
    out = sc.output_path
    if sc.output_format == "csv":
        write_csv(out, ["eta_hat", "psll_db"], rows)
        dump_json(_envelope("eta_sweep_meta", sc, rows=len(rows)), _sidecar(out, ".meta.json"))
    else:
        dump_json(_envelope("eta_sweep", sc, eta_hat=[r[0] for r in rows],
                            psll_db=[r[1] for r in rows]), out)
    return rows


def run_sumrate(sc: Scenario):
    curves = {}
    for label, spec in sc.geometries:
        curves[label] = monte_carlo_sumrate(
            build_layout(spec), K=sc.users, angle_policy=sc.angle_policy,
            snr_grid_db=sc.snr_grid_db, trials=sc.trials, seed=sc.seed,
            snr_axis=sc.snr_axis, threads=sc.threads,
        )
    resolved = sc.resolved()
    meta = {"seed": sc.seed, "config_hash": config_hash(resolved),
            "curves": {k: c.config for k, c in curves.items()}}
    out = sc.output_path
    if sc.output_format == "csv":
        rows = [(label, s, m, e) for label, c in curves.items()
                for s, m, e in zip(c.snr_grid_db, c.mean_sumrate, c.stderr)]
        write_csv(out, ["geometry", "snr_db", "mean_sumrate", "stderr"], rows)
        dump_json(_envelope("sumrate_meta", sc, **meta), _sidecar(out, ".meta.json"))
    else:
        dump_json(_envelope("sumrate", sc, **meta, results={
            k: {"snr_db": c.snr_grid_db, "mean_sumrate": c.mean_sumrate, "stderr": c.stderr,
                "trial_count": c.trial_count} for k, c in curves.items()}), out)
    return curves


def run_table1(output=None, fmt="json", threads=1, range_points=DEFAULT_RANGE_POINTS,
               angle_points=DEFAULT_ANGLE_POINTS):
    table = sidelobe_table(range_points=range_points, angle_points=angle_points,
                           threads=threads)
    rows = table_rows(table)
    config = {"geometries": list(GEOMETRIES), "focus": "R_D/40 on the reference direction",
              "range_points": range_points, "angle_points": angle_points,
              "psll_tolerance_db": PSLL_TOL_DB, "isll_tolerance_db": ISLL_TOL_DB,
              "isll_convention": {"integrand": "gain", "range_measure": "log",
                                  "angle_measure": "native"}}
    if fmt == "csv":
        keys = list(rows[0])
        write_csv(output, keys, [[r[k] for k in keys] for r in rows])
        if output:
            dump_json({"schema": SCHEMA, "kind": "table1_meta", "config": config},
                      _sidecar(output, ".meta.json"))
    else:
        dump_json({"schema": SCHEMA, "kind": "table1", "version": __version__,
                   "config": config, "rows": rows}, output)
    print(format_table(rows), file=sys.stderr)
    return rows


def format_table(rows):
    lines = [f"{'geometry':<8} {'domain':<6} {'PSLL dB':>10} {'ISLL dB':>10}  (published)"]
    for r in rows:
        lines.append(f"{r['geometry']:<8} {r['domain']:<6} {r['psll_db']:>10.4f} "
                     f"{r['isll_db']:>10.4f}  ({r['published_psll_db']:.1f}, "
                     f"{r['published_isll_db']:.1f})")
    return "\n".join(lines)


# ---------------------------------------------------------------- entry point


def build_parser():
    p = argparse.ArgumentParser(prog="nfbeamscope", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("pattern", "eta-sweep", "sumrate", "table1"):
        s = sub.add_parser(name)
        s.add_argument("--config", metavar="PATH", required=name != "table1" and name != "eta-sweep")
        s.add_argument("--output", metavar="PATH")
        s.add_argument("--format", choices=("csv", "json"))
        s.add_argument("--seed", type=int)
        s.add_argument("--trials", type=int)
        s.add_argument("--threads", type=int)
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def _apply_overrides(sc, args):
    if args.output is not None:
        sc.output_path = args.output
    if args.format is not None:
        sc.output_format = args.format
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed: must be nonnegative")
        sc.seed = args.seed
    if args.trials is not None:
        sc.trials = _positive_int(args.trials, "--trials")
    if args.threads is not None:
        sc.threads = _positive_int(args.threads, "--threads")
    return sc


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "table1":
            threads = _positive_int(args.threads, "--threads") if args.threads else 1
            run_table1(args.output, args.format or "json", threads)
            return 0
        sweep = {"pattern": "axial", "eta-sweep": "eta", "sumrate": "sumrate"}[args.command]
        if args.config is None:
            sc = parse_scenario({"sweep": sweep})
        else:
            sc = load_scenario(args.config, sweep)
        sc = _apply_overrides(sc, args)
        {"pattern": run_pattern, "eta-sweep": run_eta_sweep, "sumrate": run_sumrate}[
            args.command](sc)
    except ConfigError as exc:
        print(f"nfbeamscope: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SegmentationError, ArithmeticError, FloatingPointError) as exc:
        print(f"nfbeamscope: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
