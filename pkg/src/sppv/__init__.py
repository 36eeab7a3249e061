"""Threshold-free polar vortex split/displacement scores via superlevel
persistence of daily geopotential-height grids."""

from .complexes import (
    FilteredComplex,
    FiltrationOrder,
    build_grid_complex,
    build_polar_complex,
    filtration_order,
)
from .errors import FieldError, ManifestError, RenderError, ScoreError, SppvError
from .field import (
    DatasetManifest,
    EventList,
    EventRow,
    GphField,
    SynthSpec,
    WindSeries,
    load_events,
    load_manifest,
    load_wind,
    parse_events_csv,
    parse_field_bin,
    parse_field_csv,
    parse_manifest_csv,
    parse_wind_csv,
    read_field,
    synth_field,
    write_field_bin,
    write_field_csv,
)
from .persistence import (
    PersistenceDiagram,
    PersistencePair,
    active_backend,
    betti_at,
    h1_lifespans,
    reduce,
    reduce_naive,
    warmup,
)
from .render import (
    PlotSpec,
    render_multi_pressure_svg,
    render_scatter_svg,
    render_series_svg,
)
from .scores import (
    DayScores,
    EventScore,
    ScoreSeries,
    displacement_score,
    event_grand_means,
    event_scores_csv,
    event_window_max,
    manifest_provider,
    normal_baseline,
    score_day,
    score_series,
    scores_csv,
    split_score,
)

__version__ = "0.1.0"
