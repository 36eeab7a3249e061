"""Split and displacement scores, per-day records, series, and baselines.

Both scores are ratios of H1 lifespans, so they are threshold-free and
invariant under positive affine rescaling of the field:

  split score         second longest polar H1 lifespan / longest
  displacement score  longest grid H1 lifespan / longest polar H1 lifespan

A flat polar diagram (longest lifespan zero) scores 0 on both and sets
the ``degenerate`` flag instead of raising, so whole-winter batch runs
never abort on one bad day.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .complexes import build_grid_complex, build_polar_complex
from .errors import ScoreError
from .field import DatasetManifest, EventList, GphField, WindSeries
from .persistence import PersistenceDiagram, h1_lifespans, reduce

log = logging.getLogger("sppv")

SPLIT_SOURCES = ("polar", "grid")

# Normal-day gate for the visualization baseline: a day counts as a
# normal vortex when displacement < 0.1 and split < 0.05.
BASELINE_DISPLACEMENT_MAX = 0.1
BASELINE_SPLIT_MAX = 0.05


@dataclass(frozen=True)
class DayScores:
    """Scores and lifespans for one day at one pressure level."""

    date: dt.date
    pressure_hpa: float
    split_score: float
    displacement_score: float
    h_grid: float
    h_cyl: float
    l2_cyl: float
    degenerate: bool
    wind_negative: bool | None = None

    def as_dict(self) -> dict:
        return {
            "date": self.date.isoformat(),
            "pressure_hpa": self.pressure_hpa,
            "split": self.split_score,
            "displacement": self.displacement_score,
            "h_grid": self.h_grid,
            "h_cyl": self.h_cyl,
            "l2_cyl": self.l2_cyl,
            "degenerate": self.degenerate,
            "wind_negative": self.wind_negative,
        }


@dataclass(frozen=True)
class ScoreSeries:
    """Ordered day scores over a date window around a focal date."""

    days: tuple[DayScores, ...]
    focal_date: dt.date
    baseline_mean: float | None = None
    baseline_std: float | None = None
    missing_dates: tuple[dt.date, ...] = ()

    def dates(self) -> list[dt.date]:
        return [d.date for d in self.days]


@dataclass(frozen=True)
class EventScore:
    """Score maxima over one event's comparison window."""

    definition: str
    event_date: dt.date
    max_split: float
    max_displacement: float


def _top_two(lifespans: Sequence[float]) -> tuple[float, float]:
    first = lifespans[0] if len(lifespans) else 0.0
    second = lifespans[1] if len(lifespans) > 1 else 0.0
    return first, second


def _top_two_h1(diagram: PersistenceDiagram) -> tuple[float, float]:
    """Two largest H1 lifespans without sorting the whole diagram.

    Value-identical to the head of ``h1_lifespans`` (ties only permute
    equal values).
    """
    mask = (diagram.dims == 1) & diagram.finite_mask
    spans = diagram.births[mask] - diagram.deaths[mask]
    if spans.size == 0:
        return 0.0, 0.0
    if spans.size == 1:
        return float(spans[0]), 0.0
    top = np.partition(spans, spans.size - 2)[-2:]
    return float(top[1]), float(top[0])


def split_score(cyl_diagram: PersistenceDiagram) -> float:
    """Second-longest over longest H1 lifespan; 0 when degenerate."""
    first, second = _top_two(h1_lifespans(cyl_diagram))
    return second / first if first > 0 else 0.0


def displacement_score(
    grid_diagram: PersistenceDiagram, cyl_diagram: PersistenceDiagram
) -> float:
    """Longest grid H1 lifespan over longest polar H1 lifespan.

    Near 0 for a pole-centered vortex; can be close to or above 1 for a
    displaced one. 0 when the polar diagram is degenerate.
    """
    h_grid, _ = _top_two(h1_lifespans(grid_diagram))
    h_cyl, _ = _top_two(h1_lifespans(cyl_diagram))
    return h_grid / h_cyl if h_cyl > 0 else 0.0


def score_day(
    field: GphField,
    *,
    min_lat: float | None = None,
    split_source: str = "polar",
    wind_u: float | None = None,
) -> DayScores:
    """Build both complexes, reduce both, and fill a DayScores record."""
    if split_source not in SPLIT_SOURCES:
        raise ScoreError(f"split source must be one of {SPLIT_SOURCES}")
    if min_lat is not None:
        field = field.crop(min_lat)
    grid_diagram = reduce(build_grid_complex(field))
    cyl_diagram = reduce(build_polar_complex(field))
    h_grid, l2_grid = _top_two_h1(grid_diagram)
    h_cyl, l2_cyl = _top_two_h1(cyl_diagram)
    if split_source == "polar":
        split = l2_cyl / h_cyl if h_cyl > 0 else 0.0
    else:
        split = l2_grid / h_grid if h_grid > 0 else 0.0
    displacement = h_grid / h_cyl if h_cyl > 0 else 0.0
    return DayScores(
        date=field.date,
        pressure_hpa=field.pressure_hpa,
        split_score=split,
        displacement_score=displacement,
        h_grid=h_grid,
        h_cyl=h_cyl,
        l2_cyl=l2_cyl,
        degenerate=h_cyl == 0.0,
        wind_negative=None if wind_u is None else wind_u < 0.0,
    )


def normal_baseline(all_days: Sequence[DayScores]) -> tuple[float, float] | None:
    """Mean and population std of h_cyl over normal-vortex days.

    Returns None when no day qualifies. Visualization aid only; the
    scores themselves never use it.
    """
    heights = [
        d.h_cyl
        for d in all_days
        if d.displacement_score < BASELINE_DISPLACEMENT_MAX
        and d.split_score < BASELINE_SPLIT_MAX
    ]
    if not heights:
        return None
    arr = np.asarray(heights)
    return float(arr.mean()), float(arr.std())


def date_window(focal: dt.date, days_before: int, days_after: int) -> list[dt.date]:
    if days_before < 0 or days_after < 0:
        raise ScoreError("days_before and days_after must be non-negative")
    start = focal - dt.timedelta(days=days_before)
    return [start + dt.timedelta(days=k) for k in range(days_before + days_after + 1)]


def score_series(
    manifest: DatasetManifest,
    pressure_hpa: float,
    focal_date: dt.date,
    days_before: int,
    days_after: int,
    wind: WindSeries | None = None,
    *,
    min_lat: float | None = None,
    split_source: str = "polar",
    jobs: int = 1,
) -> ScoreSeries:
    """Score every available day in the window, in parallel when asked.

    Individually missing days are skipped with a warning and recorded on
    the series; a window with no data at all is an error.
    """
    wanted = date_window(focal_date, days_before, days_after)
    available = [d for d in wanted if (d, pressure_hpa) in manifest.entries]
    missing = [d for d in wanted if (d, pressure_hpa) not in manifest.entries]
    for d in missing:
        log.warning(
            "no field for %s at %g hPa; day skipped", d.isoformat(), pressure_hpa
        )
    if not available:
        raise ScoreError(
            f"no data in window {wanted[0].isoformat()}..{wanted[-1].isoformat()} "
            f"at {pressure_hpa:g} hPa"
        )

    def one(date: dt.date) -> DayScores:
        field = manifest.load(date, pressure_hpa)
        wind_u = wind.samples.get(date) if wind is not None else None
        return score_day(
            field, min_lat=min_lat, split_source=split_source, wind_u=wind_u
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            days = list(pool.map(one, available))
    else:
        days = [one(d) for d in available]
    days.sort(key=lambda d: d.date)
    baseline = normal_baseline(days)
    return ScoreSeries(
        days=tuple(days),
        focal_date=focal_date,
        baseline_mean=baseline[0] if baseline else None,
        baseline_std=baseline[1] if baseline else None,
        missing_dates=tuple(missing),
    )


DayProvider = Callable[[dt.date], DayScores]


def event_window_max(
    provider: DayProvider, events: EventList
) -> list[EventScore]:
    """Per event, the maxima of both scores over its window."""
    out: list[EventScore] = []
    for row in events.rows:
        window = []
        date = row.window_start
        while date <= row.window_end:
            window.append(date)
            date += dt.timedelta(days=1)
        try:
            scored = [provider(d) for d in window]
        except Exception as exc:
            raise ScoreError(
                f"cannot score window {row.window_start.isoformat()}.."
                f"{row.window_end.isoformat()} for event "
                f"{row.event_date.isoformat()} ({row.definition}): {exc}"
            ) from exc
        out.append(
            EventScore(
                definition=row.definition,
                event_date=row.event_date,
                max_split=max(d.split_score for d in scored),
                max_displacement=max(d.displacement_score for d in scored),
            )
        )
    return out


def event_grand_means(event_scores: Sequence[EventScore]) -> tuple[float, float]:
    """(mean max displacement, mean max split) across events."""
    if not event_scores:
        raise ScoreError("no event scores to average")
    return (
        float(np.mean([e.max_displacement for e in event_scores])),
        float(np.mean([e.max_split for e in event_scores])),
    )


def manifest_provider(
    manifest: DatasetManifest,
    pressure_hpa: float,
    *,
    min_lat: float | None = None,
    split_source: str = "polar",
) -> DayProvider:
    """Day scorer backed by a manifest, memoized since windows overlap."""
    cache: dict[dt.date, DayScores] = {}

    def provider(date: dt.date) -> DayScores:
        if date not in cache:
            field = manifest.load(date, pressure_hpa)
            cache[date] = score_day(
                field, min_lat=min_lat, split_source=split_source
            )
        return cache[date]

    return provider


# ---------------------------------------------------------------------------
# CSV serialization (the stable on-disk schema for scores)


def _fmt(x: float) -> str:
    return repr(float(x))


def scores_csv(days: Iterable[DayScores]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        [
            "date", "pressure_hpa", "split", "displacement",
            "h_grid", "h_cyl", "l2_cyl", "degenerate", "wind_negative",
        ]
    )
    for d in days:
        writer.writerow(
            [
                d.date.isoformat(),
                _fmt(d.pressure_hpa),
                _fmt(d.split_score),
                _fmt(d.displacement_score),
                _fmt(d.h_grid),
                _fmt(d.h_cyl),
                _fmt(d.l2_cyl),
                "true" if d.degenerate else "false",
                "" if d.wind_negative is None else ("true" if d.wind_negative else "false"),
            ]
        )
    return out.getvalue()


def event_scores_csv(event_scores: Iterable[EventScore]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["definition", "event_date", "max_displacement", "max_split"])
    for e in event_scores:
        writer.writerow(
            [e.definition, e.event_date.isoformat(), _fmt(e.max_displacement), _fmt(e.max_split)]
        )
    return out.getvalue()
