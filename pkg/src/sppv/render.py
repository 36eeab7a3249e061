"""Publication-style SVG plots, built from primitives for byte-exact output.

No plotting dependency: identical inputs must produce identical bytes so
golden tests and the end-to-end determinism check stay trivial.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import RenderError
from .scores import EventScore, ScoreSeries

PANELS = ("lifespans", "split", "displacement")

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
_SECOND_COLOR = "#7fb3d5"
_WIND_COLOR = "#d62728"
_BASELINE_COLOR = "#555555"
MAX_TICK_LABELS = 16


@dataclass(frozen=True)
class PlotSpec:
    width: int = 960
    height: int = 720
    panels: tuple[str, ...] = PANELS
    emphasize_focal: bool = True
    # legend label overrides, in sorted-key order (e.g. per pressure level)
    series_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise RenderError("plot dimensions must be positive")
        if not self.panels:
            raise RenderError("at least one panel is required")
        for p in self.panels:
            if p not in PANELS:
                raise RenderError(f"unknown panel {p!r}; choose from {PANELS}")


def _f(x: float) -> str:
    return f"{x:.2f}"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        .replace('"', "&quot;")
    )


class _Svg:
    def __init__(self, width: int, height: int):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        ]

    def add(self, element: str) -> None:
        self.parts.append(element)

    def line(self, x1, y1, x2, y2, stroke, width=1.0, dash: str | None = None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.add(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"{d}/>'
        )

    def polyline(self, points, stroke, width=1.5):
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in points)
        self.add(
            f'<polyline fill="none" stroke="{stroke}" '
            f'stroke-width="{_f(width)}" points="{pts}"/>'
        )

    def circle(self, x, y, r, fill, cls: str | None = None):
        c = f' class="{cls}"' if cls else ""
        self.add(f'<circle{c} cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{fill}"/>')

    def square(self, x, y, side, fill, cls: str | None = None):
        c = f' class="{cls}"' if cls else ""
        half = side / 2
        self.add(
            f'<rect{c} x="{_f(x - half)}" y="{_f(y - half)}" width="{_f(side)}" '
            f'height="{_f(side)}" fill="{fill}"/>'
        )

    def text(self, x, y, s, size=12, anchor="middle", bold=False, rotate=None):
        weight = ' font-weight="bold"' if bold else ""
        rot = f' transform="rotate({rotate} {_f(x)} {_f(y)})"' if rotate is not None else ""
        self.add(
            f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}" '
            f'font-size="{size}" font-family="Helvetica,Arial,sans-serif"'
            f"{weight}{rot}>{_esc(s)}</text>"
        )

    def open_group(self, gid: str) -> None:
        self.add(f'<g id="{gid}">')

    def close_group(self) -> None:
        self.add("</g>")

    def document(self) -> str:
        return "\n".join(self.parts) + "\n</svg>\n"


def _tick_indices(n: int, focal_idx: int) -> list[int]:
    """At most MAX_TICK_LABELS evenly strided indices, always including
    the focal index."""
    stride = max(1, math.ceil(n / MAX_TICK_LABELS))
    first = focal_idx % stride
    return list(range(first, n, stride))


def _value_range(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        pad = 1.0 if hi == 0 else abs(hi) * 0.05
    else:
        pad = (hi - lo) * 0.08
    return lo - pad, hi + pad


class _Panel:
    """Maps data coordinates into one horizontal band of the canvas."""

    def __init__(self, left, right, top, bottom, n_x, y_lo, y_hi):
        self.left, self.right = left, right
        self.top, self.bottom = top, bottom
        self.n_x = n_x
        self.y_lo, self.y_hi = y_lo, y_hi

    def x(self, i: int) -> float:
        if self.n_x == 1:
            return (self.left + self.right) / 2
        return self.left + i * (self.right - self.left) / (self.n_x - 1)

    def y(self, v: float) -> float:
        frac = (v - self.y_lo) / (self.y_hi - self.y_lo)
        return self.bottom - frac * (self.bottom - self.top)


def _draw_frame(svg: _Svg, panel: _Panel, title: str) -> None:
    svg.line(panel.left, panel.bottom, panel.right, panel.bottom, "#000000", 1.0)
    svg.line(panel.left, panel.top, panel.left, panel.bottom, "#000000", 1.0)
    svg.text(panel.left, panel.top - 6, title, size=13, anchor="start", bold=True)
    for frac in (0.0, 0.5, 1.0):
        v = panel.y_lo + frac * (panel.y_hi - panel.y_lo)
        y = panel.y(v)
        svg.line(panel.left - 4, y, panel.left, y, "#000000", 1.0)
        svg.text(panel.left - 8, y + 4, f"{v:.3g}", size=10, anchor="end")


def _draw_date_axis(
    svg: _Svg,
    panel: _Panel,
    dates: Sequence[dt.date],
    focal: dt.date | None,
    emphasize: bool,
) -> None:
    focal_idx = dates.index(focal) if focal in dates else 0
    for i in _tick_indices(len(dates), focal_idx):
        x = panel.x(i)
        svg.line(x, panel.bottom, x, panel.bottom + 4, "#000000", 1.0)
        is_focal = emphasize and focal is not None and dates[i] == focal
        svg.text(
            x, panel.bottom + 14, dates[i].isoformat(), size=9, bold=is_focal
        )


def render_series_svg(series: ScoreSeries, spec: PlotSpec | None = None) -> str:
    """Stacked panels over the series' dates.

    The lifespan panel shows the two longest polar lifespans per day plus
    the normal-vortex baseline (dashed mean, dotted mean +/- std) when one
    exists. Score panels carry red squares on days whose zonal-mean wind
    was negative; absent wind data simply draws no markers. Every day is
    plotted even when its tick label is thinned away; the focal date's
    label is bold.
    """
    spec = spec or PlotSpec()
    if not series.days:
        raise RenderError("cannot render an empty series")
    days = series.days
    dates = [d.date for d in days]
    n = len(days)

    svg = _Svg(spec.width, spec.height)
    margin_left, margin_right, margin_top, margin_bottom = 70, 30, 40, 30
    gap = 46
    panel_h = (
        spec.height - margin_top - margin_bottom - gap * (len(spec.panels) - 1)
    ) / len(spec.panels)
    svg.text(
        spec.width / 2,
        22,
        f"{days[0].pressure_hpa:g} hPa  "
        f"{dates[0].isoformat()}..{dates[-1].isoformat()}",
        size=14,
        bold=True,
    )

    for k, name in enumerate(spec.panels):
        top = margin_top + k * (panel_h + gap)
        bottom = top + panel_h
        if name == "lifespans":
            pool = [d.h_cyl for d in days] + [d.l2_cyl for d in days]
            if series.baseline_mean is not None:
                pool += [
                    series.baseline_mean - series.baseline_std,
                    series.baseline_mean + series.baseline_std,
                ]
            y_lo, y_hi = _value_range(pool)
            title = "H1 lifespans (m), polar embedding"
        elif name == "split":
            y_lo, y_hi = _value_range([d.split_score for d in days] + [0.0, 1.0])
            title = "split score"
        else:
            y_lo, y_hi = _value_range(
                [d.displacement_score for d in days] + [0.0, 1.0]
            )
            title = "displacement score"
        panel = _Panel(
            margin_left, spec.width - margin_right, top, bottom, n, y_lo, y_hi
        )
        svg.open_group(f"panel-{name}")
        _draw_frame(svg, panel, title)
        _draw_date_axis(svg, panel, dates, series.focal_date, spec.emphasize_focal)

        if name == "lifespans":
            if series.baseline_mean is not None:
                mean, std = series.baseline_mean, series.baseline_std
                y = panel.y(mean)
                svg.line(panel.left, y, panel.right, y, _BASELINE_COLOR, 1.0, dash="6,4")
                for v in (mean - std, mean + std):
                    y = panel.y(v)
                    svg.line(panel.left, y, panel.right, y, _BASELINE_COLOR, 1.0, dash="2,4")
            for values, color, cls in (
                ([d.h_cyl for d in days], _COLORS[0], "pt-h1"),
                ([d.l2_cyl for d in days], _SECOND_COLOR, "pt-h2"),
            ):
                pts = [(panel.x(i), panel.y(v)) for i, v in enumerate(values)]
                svg.polyline(pts, color)
                for i, (x, y) in enumerate(pts):
                    r = 4.0 if dates[i] == series.focal_date and spec.emphasize_focal else 2.5
                    svg.circle(x, y, r, color, cls=cls)
        else:
            values = [
                d.split_score if name == "split" else d.displacement_score
                for d in days
            ]
            pts = [(panel.x(i), panel.y(v)) for i, v in enumerate(values)]
            svg.polyline(pts, _COLORS[0])
            for i, (x, y) in enumerate(pts):
                r = 4.0 if dates[i] == series.focal_date and spec.emphasize_focal else 2.5
                svg.circle(x, y, r, _COLORS[0], cls="pt")
                if days[i].wind_negative:
                    svg.square(x, y, 9.0, _WIND_COLOR, cls="wind")
        svg.close_group()
    return svg.document()


def render_multi_pressure_svg(
    series_by_pressure: Mapping[float, ScoreSeries], spec: PlotSpec | None = None
) -> str:
    """Split and displacement panels with one curve per pressure level."""
    spec = spec or PlotSpec(panels=("split", "displacement"))
    if len(series_by_pressure) < 2:
        raise RenderError("multi-pressure plot needs at least two series")
    pressures = sorted(series_by_pressure)
    all_series = [series_by_pressure[p] for p in pressures]
    dates = all_series[0].dates()
    for s in all_series[1:]:
        if s.dates() != dates:
            raise RenderError("all series must share the same date axis")
    n = len(dates)
    panels = tuple(p for p in spec.panels if p != "lifespans") or ("split", "displacement")

    svg = _Svg(spec.width, spec.height)
    margin_left, margin_right, margin_top, margin_bottom = 70, 120, 40, 30
    gap = 46
    panel_h = (
        spec.height - margin_top - margin_bottom - gap * (len(panels) - 1)
    ) / len(panels)
    svg.text(
        spec.width / 2, 22,
        f"{dates[0].isoformat()}..{dates[-1].isoformat()}", size=14, bold=True,
    )

    for k, name in enumerate(panels):
        top = margin_top + k * (panel_h + gap)
        bottom = top + panel_h
        pool = [0.0, 1.0]
        for s in all_series:
            pool += [
                d.split_score if name == "split" else d.displacement_score
                for d in s.days
            ]
        y_lo, y_hi = _value_range(pool)
        panel = _Panel(
            margin_left, spec.width - margin_right, top, bottom, n, y_lo, y_hi
        )
        svg.open_group(f"panel-{name}")
        _draw_frame(svg, panel, f"{name} score")
        _draw_date_axis(
            svg, panel, dates, all_series[0].focal_date, spec.emphasize_focal
        )
        for idx, pressure in enumerate(pressures):
            color = _COLORS[idx % len(_COLORS)]
            values = [
                d.split_score if name == "split" else d.displacement_score
                for d in series_by_pressure[pressure].days
            ]
            pts = [(panel.x(i), panel.y(v)) for i, v in enumerate(values)]
            svg.polyline(pts, color)
            for x, y in pts:
                svg.circle(x, y, 2.5, color, cls=f"pt-{pressure:g}")
            ly = panel.top + 14 * (idx + 1)
            lx = spec.width - margin_right + 12
            label = (
                spec.series_labels[idx]
                if idx < len(spec.series_labels)
                else f"{pressure:g} hPa"
            )
            svg.line(lx, ly - 4, lx + 18, ly - 4, color, 2.0)
            svg.text(lx + 24, ly, label, size=11, anchor="start")
        svg.close_group()
    return svg.document()


def render_scatter_svg(
    event_scores: Sequence[EventScore], spec: PlotSpec | None = None
) -> str:
    """One point per event: displacement on x, split on y.

    Events sharing an event date across several definitions collapse into
    one point labeled "Multi" at the componentwise max of their scores.
    """
    spec = spec or PlotSpec(width=640, height=560)
    if not event_scores:
        raise RenderError("cannot render an empty event list")

    grouped: dict[dt.date, list[EventScore]] = {}
    for e in event_scores:
        grouped.setdefault(e.event_date, []).append(e)
    points: list[tuple[dt.date, str, float, float]] = []
    for date in sorted(grouped):
        rows = grouped[date]
        labels = sorted({r.definition for r in rows})
        label = "Multi" if len(labels) > 1 else labels[0]
        points.append(
            (
                date,
                label,
                max(r.max_displacement for r in rows),
                max(r.max_split for r in rows),
            )
        )
    classes = sorted({label for _, label, _, _ in points})
    color_of = {c: _COLORS[i % len(_COLORS)] for i, c in enumerate(classes)}

    svg = _Svg(spec.width, spec.height)
    margin_left, margin_right, margin_top, margin_bottom = 60, 110, 40, 50
    left, right = margin_left, spec.width - margin_right
    top, bottom = margin_top, spec.height - margin_bottom
    x_hi = max(1.0, max(p[2] for p in points)) * 1.08
    y_hi = max(1.0, max(p[3] for p in points)) * 1.08

    svg.text(spec.width / 2, 22, "event-window score maxima", size=14, bold=True)
    svg.line(left, bottom, right, bottom, "#000000", 1.0)
    svg.line(left, top, left, bottom, "#000000", 1.0)
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        x = left + frac * (right - left)
        y = bottom - frac * (bottom - top)
        svg.line(x, bottom, x, bottom + 4, "#000000", 1.0)
        svg.text(x, bottom + 16, f"{frac * x_hi:.2f}", size=10)
        svg.line(left - 4, y, left, y, "#000000", 1.0)
        svg.text(left - 8, y + 4, f"{frac * y_hi:.2f}", size=10, anchor="end")
    svg.text((left + right) / 2, spec.height - 14, "max displacement score", size=12)
    svg.text(16, (top + bottom) / 2, "max split score", size=12, rotate=-90)

    svg.open_group("scatter")
    for date, label, xv, yv in points:
        x = left + (xv / x_hi) * (right - left)
        y = bottom - (yv / y_hi) * (bottom - top)
        svg.circle(x, y, 4.0, color_of[label], cls="event")
    svg.close_group()

    for i, c in enumerate(classes):
        ly = top + 16 * (i + 1)
        lx = right + 14
        svg.circle(lx, ly - 4, 4.0, color_of[c])
        svg.text(lx + 10, ly, c, size=11, anchor="start")
    return svg.document()
