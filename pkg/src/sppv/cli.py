"""Command-line entry point.

Subcommands:
  score    score one day (JSON, optional CSV row)
  series   score a date window: CSV plus SVG panels
  compare  max scores over event windows: CSV, scatter SVG, grand means
  synth    write a synthetic test field as an SPPV file
  pairs    dump a persistence diagram (or the complex itself) as CSV

Every parameter is an explicit flag; there is no hidden configuration.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import sys
from pathlib import Path

from .complexes import build_grid_complex, build_polar_complex
from .errors import SppvError
from .field import (
    GphField,
    SynthSpec,
    load_events,
    load_manifest,
    load_wind,
    read_field,
    synth_field,
    write_field_bin,
)
from .persistence import reduce
from .render import render_multi_pressure_svg, render_scatter_svg, render_series_svg
from .scores import (
    event_grand_means,
    event_scores_csv,
    event_window_max,
    manifest_provider,
    score_day,
    score_series,
    scores_csv,
)

log = logging.getLogger("sppv")


def _date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO-8601 date: {text!r}") from None


def _add_field_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", type=Path, help="field file (SPPV binary or lat,lon,value CSV)")
    p.add_argument("--manifest", type=Path, help="dataset manifest CSV")
    p.add_argument("--date", type=_date, help="day of interest (ISO-8601)")
    p.add_argument(
        "--pressure", type=float, action="append",
        help="pressure level in hPa (repeatable where a command supports it)",
    )


def _add_scoring_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--min-lat", type=float, help="crop grid rows below this latitude")
    p.add_argument(
        "--split-source", choices=("polar", "grid"), default="polar",
        help="which embedding's diagram feeds the split score (default: polar)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sppv",
        description="Threshold-free split and displacement scores for the "
        "stratospheric polar vortex from superlevel-set persistence of "
        "daily geopotential-height grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score a single day")
    _add_field_source(p)
    _add_scoring_flags(p)
    p.add_argument("--before", type=int, default=0, help="must be 0 for score; use series")
    p.add_argument("--after", type=int, default=0, help="must be 0 for score; use series")
    p.add_argument("--wind", type=Path, help="wind CSV for the wind_negative flag")
    p.add_argument("--out-json", type=Path, help="write the day record as JSON (default: stdout)")
    p.add_argument("--out-csv", type=Path, help="also write a one-row scores CSV")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("series", help="score a window of days around a focal date")
    _add_field_source(p)
    _add_scoring_flags(p)
    p.add_argument("--before", type=int, default=0, help="days before the focal date")
    p.add_argument("--after", type=int, default=0, help="days after the focal date")
    p.add_argument("--wind", type=Path, help="wind CSV (date,u_ms) for plot markers")
    p.add_argument("--jobs", type=int, default=1, help="parallel day-scoring tasks")
    p.add_argument("--out-csv", type=Path, help="write the scores CSV here")
    p.add_argument("--out-svg", type=Path, help="write the series SVG here")
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("compare", help="max scores over event windows from an events CSV")
    _add_field_source(p)
    _add_scoring_flags(p)
    p.add_argument("--events", type=Path, required=True,
                   help="events CSV: definition,event_date,window_start,window_end")
    p.add_argument("--out-csv", type=Path, help="write per-event maxima CSV here")
    p.add_argument("--out-svg", type=Path, help="write the scatter SVG here")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("synth", help="generate a synthetic vortex field (SPPV)")
    p.add_argument("--kind", choices=("normal", "displaced", "split"), required=True)
    p.add_argument("--out", type=Path, required=True, help="output SPPV path")
    p.add_argument("--nlat", type=int, default=19)
    p.add_argument("--nlon", type=int, default=36)
    p.add_argument("--base-height", type=float, default=30000.0)
    p.add_argument("--depth", type=float, action="append",
                   help="cone depth in meters (repeat for per-center depths)")
    p.add_argument("--center-colat", type=float, action="append",
                   help="cone center colatitude in degrees (repeatable)")
    p.add_argument("--center-lon", type=float, action="append",
                   help="cone center longitude in degrees (repeatable)")
    p.add_argument("--cone-radius", type=float, default=25.0,
                   help="great-circle cone radius in degrees")
    p.add_argument("--noise", type=float, default=0.0,
                   help="uniform noise amplitude in meters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--date", type=_date, default=dt.date(2000, 1, 1))
    p.add_argument("--pressure", type=float, default=10.0)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("pairs", help="dump a persistence diagram as CSV")
    _add_field_source(p)
    _add_scoring_flags(p)
    p.add_argument("--topology", choices=("grid", "polar"), default="polar")
    p.add_argument("--out-csv", type=Path, help="output CSV (default: stdout)")
    p.add_argument("--dump-complex", action="store_true",
                   help="dump the filtered complex (dim,height,v0,v1,v2) instead")
    p.set_defaults(func=_cmd_pairs)
    return parser


def _single_pressure(args) -> float:
    if not args.pressure:
        return 10.0
    if len(args.pressure) > 1:
        raise SppvError("this command takes a single --pressure")
    return args.pressure[0]


def _load_single_field(args) -> GphField:
    pressure = _single_pressure(args)
    if args.input is not None:
        date = args.date or dt.date(2000, 1, 1)
        return read_field(args.input, date, pressure)
    if args.manifest is not None:
        if args.date is None:
            raise SppvError("--date is required with --manifest")
        return load_manifest(args.manifest).load(args.date, pressure)
    raise SppvError("provide a field via --input or --manifest")


def _write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(content.encode("utf-8"))


def _cmd_score(args) -> int:
    if args.before != 0 or args.after != 0:
        raise SppvError("score handles one day; use the series command for windows")
    field = _load_single_field(args)
    wind_u = None
    if args.wind is not None:
        wind_u = load_wind(args.wind).samples.get(field.date)
    day = score_day(
        field, min_lat=args.min_lat, split_source=args.split_source, wind_u=wind_u
    )
    payload = json.dumps(day.as_dict(), indent=2) + "\n"
    if args.out_json is not None:
        _write(args.out_json, payload)
    else:
        sys.stdout.write(payload)
    if args.out_csv is not None:
        _write(args.out_csv, scores_csv([day]))
    return 0


def _series_svg_path(base: Path, pressure: float) -> Path:
    return base.with_name(f"{base.stem}_{pressure:g}hpa{base.suffix}")


def _cmd_series(args) -> int:
    if args.manifest is None:
        raise SppvError("series requires --manifest")
    if args.date is None:
        raise SppvError("series requires --date")
    manifest = load_manifest(args.manifest)
    pressures = args.pressure or manifest.pressures()
    if not pressures:
        raise SppvError("manifest is empty")
    wind = load_wind(args.wind) if args.wind is not None else None
    series_by_pressure = {}
    for pressure in pressures:
        series_by_pressure[pressure] = score_series(
            manifest, pressure, args.date, args.before, args.after, wind,
            min_lat=args.min_lat, split_source=args.split_source,
            jobs=max(1, args.jobs),
        )
    if args.out_csv is not None:
        rows = []
        for pressure in sorted(series_by_pressure):
            rows.extend(series_by_pressure[pressure].days)
        _write(args.out_csv, scores_csv(rows))
    if args.out_svg is not None:
        if len(pressures) == 1:
            only = series_by_pressure[pressures[0]]
            _write(args.out_svg, render_series_svg(only))
        else:
            for pressure in sorted(series_by_pressure):
                _write(
                    _series_svg_path(args.out_svg, pressure),
                    render_series_svg(series_by_pressure[pressure]),
                )
            _write(args.out_svg, render_multi_pressure_svg(series_by_pressure))
    return 0


def _cmd_compare(args) -> int:
    if args.manifest is None:
        raise SppvError("compare requires --manifest")
    manifest = load_manifest(args.manifest)
    events = load_events(args.events)
    pressure = _single_pressure(args)
    provider = manifest_provider(
        manifest, pressure, min_lat=args.min_lat, split_source=args.split_source
    )
    event_scores = event_window_max(provider, events)
    mean_disp, mean_split = event_grand_means(event_scores)
    if args.out_csv is not None:
        _write(args.out_csv, event_scores_csv(event_scores))
    if args.out_svg is not None:
        _write(args.out_svg, render_scatter_svg(event_scores))
    sys.stdout.write(
        f"events: {len(event_scores)}\n"
        f"mean max displacement: {mean_disp!r}\n"
        f"mean max split: {mean_split!r}\n"
    )
    return 0


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        kind=args.kind,
        nlat=args.nlat,
        nlon=args.nlon,
        base_height=args.base_height,
        depth=tuple(args.depth) if args.depth else 500.0,
        center_colat=tuple(args.center_colat) if args.center_colat else (),
        center_lon=tuple(args.center_lon) if args.center_lon else (),
        cone_radius=args.cone_radius,
        noise_amplitude=args.noise,
        seed=args.seed,
    )
    field = synth_field(spec, date=args.date, pressure_hpa=args.pressure)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_bytes(write_field_bin(field))
    log.info("wrote %s", args.out)
    return 0


def _cmd_pairs(args) -> int:
    field = _load_single_field(args)
    if args.min_lat is not None:
        field = field.crop(args.min_lat)
    build = build_grid_complex if args.topology == "grid" else build_polar_complex
    cx = build(field)
    lines = []
    if args.dump_complex:
        lines.append("dim,height,v0,v1,v2")
        for i, h in enumerate(cx.vertex_heights):
            lines.append(f"0,{float(h)!r},{i},,")
        eh = cx.edge_heights()
        for k in range(cx.n_edges):
            u, v = cx.edges[k]
            lines.append(f"1,{float(eh[k])!r},{u},{v},")
        th = cx.triangle_heights()
        for k in range(cx.n_triangles):
            a, b, c = cx.triangles[k]
            lines.append(f"2,{float(th[k])!r},{a},{b},{c}")
    else:
        diagram = reduce(cx)
        lines.append("dim,birth,death,lifespan")
        for p in diagram.pairs():
            lines.append(f"{p.dim},{p.birth_height!r},{p.death_height!r},{p.lifespan!r}")
    content = "\n".join(lines) + "\n"
    if args.out_csv is not None:
        _write(args.out_csv, content)
    else:
        sys.stdout.write(content)
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SppvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # stdout vanished (e.g. piped into head); exit quietly
        import os

        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
