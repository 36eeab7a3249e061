"""Daily geopotential-height grids and the file formats that carry them.

A field is one day's regular latitude-longitude grid of geopotential
heights (meters) at a single pressure level over the northern hemisphere.
Rows are ordered by increasing latitude, columns by increasing longitude.

Supported serializations:
  * field CSV     header ``lat,lon,value``, any row order, complete grid
  * SPPV binary   magic ``SPPV``, version u16=1, nlat u32, nlon u32,
                  then lats, lons, values (row-major) as little-endian f64
  * manifest CSV  header ``date,pressure_hpa,path``
  * wind CSV      header ``date,u_ms``
  * events CSV    header ``definition,event_date,window_start,window_end``
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
import struct
from dataclasses import dataclass
from pathlib import Path
import numpy as np

from .errors import FieldError, ManifestError

_MAGIC = b"SPPV"
_VERSION = 1


def _parse_date(text: str, context: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise ManifestError(f"malformed date {text!r} in {context}") from None


@dataclass(frozen=True)
class GphField:
    """One day's gph grid at one pressure level.

    ``values[i, j]`` is the height in meters at ``lats[i]``, ``lons[j]``.
    Arrays are read-only after construction.
    """

    date: dt.date
    pressure_hpa: float
    lats: np.ndarray
    lons: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        lats = np.asarray(self.lats, dtype=np.float64)
        lons = np.asarray(self.lons, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "lats", lats)
        object.__setattr__(self, "lons", lons)
        object.__setattr__(self, "values", values)
        if self.pressure_hpa <= 0 or not math.isfinite(self.pressure_hpa):
            raise FieldError(f"pressure must be positive, got {self.pressure_hpa}")
        if lats.ndim != 1 or lons.ndim != 1:
            raise FieldError("lats and lons must be one-dimensional")
        if lats.size < 3:
            raise FieldError(f"need at least 3 latitude rows, got {lats.size}")
        if lons.size < 4:
            raise FieldError(f"need at least 4 longitude columns, got {lons.size}")
        if np.any(np.diff(lats) <= 0):
            raise FieldError("latitudes must be strictly increasing")
        if np.any(np.diff(lons) <= 0):
            raise FieldError("longitudes must be strictly increasing")
        if lats[0] < 0.0 or lats[-1] > 90.0:
            raise FieldError("latitudes must lie in [0, 90]")
        if lons[0] < 0.0 or lons[-1] >= 360.0:
            raise FieldError("longitudes must lie in [0, 360)")
        if values.shape != (lats.size, lons.size):
            raise FieldError(
                f"values shape {values.shape} does not match grid "
                f"({lats.size}, {lons.size})"
            )
        if not np.all(np.isfinite(values)):
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise FieldError(f"non-finite value at lat={lats[i]:g} lon={lons[j]:g}")
        for arr in (lats, lons, values):
            arr.setflags(write=False)

    @property
    def nlat(self) -> int:
        return self.lats.size

    @property
    def nlon(self) -> int:
        return self.lons.size

    def crop(self, min_lat: float) -> "GphField":
        """Drop rows below ``min_lat`` (used by the CLI's --min-lat)."""
        keep = self.lats >= min_lat
        if keep.sum() < 3:
            raise FieldError(
                f"cropping at min_lat={min_lat:g} leaves fewer than 3 rows"
            )
        return GphField(
            self.date,
            self.pressure_hpa,
            self.lats[keep].copy(),
            self.lons.copy(),
            self.values[keep].copy(),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GphField):
            return NotImplemented
        return (
            self.date == other.date
            and self.pressure_hpa == other.pressure_hpa
            and np.array_equal(self.lats, other.lats)
            and np.array_equal(self.lons, other.lons)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


def parse_field_csv(text: str, date: dt.date, pressure_hpa: float) -> GphField:
    """Parse a ``lat,lon,value`` CSV covering a complete lat x lon product.

    Row order is irrelevant; missing cells, duplicate cells and non-finite
    values are reported with the offending coordinate.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["lat", "lon", "value"]:
        raise FieldError(f"expected header 'lat,lon,value', got {header}")
    cells: dict[tuple[float, float], float] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise FieldError(f"line {lineno}: expected 3 columns, got {len(row)}")
        try:
            lat, lon, value = (float(x) for x in row)
        except ValueError:
            raise FieldError(f"line {lineno}: non-numeric entry in {row}") from None
        if not (math.isfinite(lat) and math.isfinite(lon)):
            raise FieldError(f"line {lineno}: non-finite coordinate")
        if not math.isfinite(value):
            raise FieldError(f"non-finite value at lat={lat:g} lon={lon:g}")
        if (lat, lon) in cells:
            raise FieldError(f"duplicate grid cell lat={lat:g} lon={lon:g}")
        cells[(lat, lon)] = value
    if not cells:
        raise FieldError("field CSV has no data rows")
    lats = np.array(sorted({k[0] for k in cells}))
    lons = np.array(sorted({k[1] for k in cells}))
    values = np.full((lats.size, lons.size), np.nan)
    for (lat, lon), value in cells.items():
        values[np.searchsorted(lats, lat), np.searchsorted(lons, lon)] = value
    missing = np.argwhere(np.isnan(values))
    if missing.size:
        i, j = missing[0]
        raise FieldError(f"missing grid cell lat={lats[i]:g} lon={lons[j]:g}")
    return GphField(date, pressure_hpa, lats, lons, values)


def write_field_csv(field: GphField) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["lat", "lon", "value"])
    for i, lat in enumerate(field.lats):
        for j, lon in enumerate(field.lons):
            writer.writerow([repr(float(lat)), repr(float(lon)), repr(float(field.values[i, j]))])
    return out.getvalue()


def write_field_bin(field: GphField) -> bytes:
    """Serialize to the SPPV binary format (little-endian f64 throughout)."""
    header = _MAGIC + struct.pack("<HII", _VERSION, field.nlat, field.nlon)
    body = (
        field.lats.astype("<f8").tobytes()
        + field.lons.astype("<f8").tobytes()
        + field.values.astype("<f8").tobytes()
    )
    return header + body


def parse_field_bin(data: bytes, date: dt.date, pressure_hpa: float) -> GphField:
    """Parse SPPV bytes; the format does not carry date or pressure,
    so the caller (typically a manifest row) supplies them."""
    if len(data) < 4 or data[:4] != _MAGIC:
        raise FieldError("bad magic: not an SPPV file")
    if len(data) < 14:
        raise FieldError("truncated SPPV header")
    version, nlat, nlon = struct.unpack_from("<HII", data, 4)
    if version != _VERSION:
        raise FieldError(f"unsupported SPPV version {version}")
    expected = 14 + 8 * (nlat + nlon + nlat * nlon)
    if len(data) < expected:
        raise FieldError(
            f"truncated SPPV payload: expected {expected} bytes, got {len(data)}"
        )
    if len(data) > expected:
        raise FieldError(
            f"SPPV payload size mismatch: expected {expected} bytes, got {len(data)}"
        )
    off = 14
    lats = np.frombuffer(data, "<f8", nlat, off).copy()
    off += 8 * nlat
    lons = np.frombuffer(data, "<f8", nlon, off).copy()
    off += 8 * nlon
    values = np.frombuffer(data, "<f8", nlat * nlon, off).reshape(nlat, nlon).copy()
    return GphField(date, pressure_hpa, lats, lons, values)


def read_field(path: Path | str, date: dt.date, pressure_hpa: float) -> GphField:
    """Read a field file, sniffing SPPV binary vs. CSV from the leading bytes."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise FieldError(f"cannot read field file {path}: {exc}") from None
    if raw[:4] == _MAGIC:
        return parse_field_bin(raw, date, pressure_hpa)
    return parse_field_csv(raw.decode("utf-8"), date, pressure_hpa)


# ---------------------------------------------------------------------------
# synthetic fields


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic vortex field built from tent-profile cones.

    Each cone subtracts ``depth * max(0, 1 - d / cone_radius)`` from the
    base height, where ``d`` is the great-circle distance in degrees to the
    cone center. Tent profiles keep expected birth/death heights exactly
    computable in tests. Noise is uniform in [-noise_amplitude,
    +noise_amplitude], drawn deterministically from ``seed``.
    """

    kind: str  # normal | displaced | split
    nlat: int = 19
    nlon: int = 36
    base_height: float = 30000.0
    depth: float | tuple[float, ...] = 500.0
    center_colat: float | tuple[float, ...] = ()
    center_lon: float | tuple[float, ...] = ()
    cone_radius: float = 25.0
    noise_amplitude: float = 0.0
    seed: int = 0

    def centers(self) -> list[tuple[float, float, float]]:
        """(colat, lon, depth) per cone, with kind-dependent defaults."""
        if self.kind not in ("normal", "displaced", "split"):
            raise FieldError(f"unknown synthetic kind {self.kind!r}")
        want = 2 if self.kind == "split" else 1
        colats = _as_tuple(self.center_colat)
        lons = _as_tuple(self.center_lon)
        if not colats:
            colats = (0.0,) if self.kind == "normal" else (
                (30.0,) if self.kind == "displaced" else (40.0, 40.0)
            )
        if not lons:
            lons = (0.0,) if want == 1 else (90.0, 270.0)
        depths = _as_tuple(self.depth)
        if len(depths) == 1:
            depths = depths * want
        if len(colats) != want or len(lons) != want or len(depths) != want:
            raise FieldError(
                f"kind={self.kind!r} needs {want} center(s), got "
                f"{len(colats)} colat / {len(lons)} lon / {len(depths)} depth"
            )
        if any(d <= 0 for d in depths):
            raise FieldError("cone depth must be positive")
        if self.cone_radius <= 0:
            raise FieldError("cone_radius must be positive")
        return list(zip(colats, lons, depths))


def _as_tuple(x) -> tuple[float, ...]:
    if isinstance(x, (int, float)):
        return (float(x),)
    return tuple(float(v) for v in x)


def synth_field(
    spec: SynthSpec,
    date: dt.date = dt.date(2000, 1, 1),
    pressure_hpa: float = 10.0,
) -> GphField:
    """Generate a deterministic synthetic field on an nlat x nlon NH grid.

    The grid spans lat 0..90 inclusive and lon 0..360 exclusive.
    """
    if spec.nlat < 3 or spec.nlon < 4:
        raise FieldError("synthetic grid must be at least 3x4")
    lats = np.linspace(0.0, 90.0, spec.nlat)
    lons = np.linspace(0.0, 360.0, spec.nlon, endpoint=False)
    lat_g, lon_g = np.meshgrid(lats, lons, indexing="ij")
    values = np.full(lat_g.shape, spec.base_height)
    for colat, clon, depth in spec.centers():
        d = _great_circle_deg(lat_g, lon_g, 90.0 - colat, clon)
        values = values - depth * np.maximum(0.0, 1.0 - d / spec.cone_radius)
    if spec.noise_amplitude > 0:
        rng = np.random.default_rng(spec.seed)
        values = values + rng.uniform(
            -spec.noise_amplitude, spec.noise_amplitude, values.shape
        )
    return GphField(date, pressure_hpa, lats, lons, values)


def _great_circle_deg(lat1, lon1, lat2, lon2):
    """Central angle in degrees between points given in degrees."""
    p1, l1, p2, l2 = (np.radians(x) for x in (lat1, lon1, lat2, lon2))
    c = np.sin(p1) * np.sin(p2) + np.cos(p1) * np.cos(p2) * np.cos(l1 - l2)
    return np.degrees(np.arccos(np.clip(c, -1.0, 1.0)))


# ---------------------------------------------------------------------------
# manifests, wind, events


@dataclass(frozen=True)
class DatasetManifest:
    """Map from (date, pressure_hpa) to the field file for that day/level."""

    entries: dict[tuple[dt.date, float], Path]

    def dates(self, pressure_hpa: float) -> list[dt.date]:
        return sorted(d for (d, p) in self.entries if p == pressure_hpa)

    def pressures(self) -> list[float]:
        return sorted({p for (_, p) in self.entries})

    def load(self, date: dt.date, pressure_hpa: float) -> GphField:
        key = (date, pressure_hpa)
        if key not in self.entries:
            raise ManifestError(
                f"manifest has no entry for {date.isoformat()} at {pressure_hpa:g} hPa"
            )
        return read_field(self.entries[key], date, pressure_hpa)


def parse_manifest_csv(text: str, base_dir: Path | None = None) -> DatasetManifest:
    """Parse ``date,pressure_hpa,path`` rows; relative paths resolve against
    ``base_dir`` (the manifest's own directory when loaded from disk)."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["date", "pressure_hpa", "path"]:
        raise ManifestError(f"expected header 'date,pressure_hpa,path', got {header}")
    entries: dict[tuple[dt.date, float], Path] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ManifestError(f"manifest line {lineno}: expected 3 columns")
        date = _parse_date(row[0], f"manifest line {lineno}")
        try:
            pressure = float(row[1])
        except ValueError:
            raise ManifestError(f"manifest line {lineno}: bad pressure {row[1]!r}") from None
        raw_path = row[2].strip()
        if not raw_path:
            raise ManifestError(f"manifest line {lineno}: empty path")
        key = (date, pressure)
        if key in entries:
            raise ManifestError(
                f"duplicate manifest entry for {date.isoformat()} at {pressure:g} hPa"
            )
        path = Path(raw_path)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        entries[key] = path
    return DatasetManifest(entries)


def load_manifest(path: Path | str) -> DatasetManifest:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from None
    return parse_manifest_csv(text, base_dir=path.parent)


@dataclass(frozen=True)
class WindSeries:
    """Zonal-mean zonal wind at 60N per date, m/s. Used only for plot markers."""

    samples: dict[dt.date, float]

    def negative(self, date: dt.date) -> bool | None:
        u = self.samples.get(date)
        return None if u is None else u < 0.0


def parse_wind_csv(text: str) -> WindSeries:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["date", "u_ms"]:
        raise ManifestError(f"expected header 'date,u_ms', got {header}")
    samples: dict[dt.date, float] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ManifestError(f"wind line {lineno}: expected 2 columns")
        date = _parse_date(row[0], f"wind line {lineno}")
        try:
            u = float(row[1])
        except ValueError:
            raise ManifestError(f"wind line {lineno}: bad wind value {row[1]!r}") from None
        if not math.isfinite(u):
            raise ManifestError(f"wind line {lineno}: non-finite wind value")
        if date in samples:
            raise ManifestError(f"duplicate wind sample for {date.isoformat()}")
        samples[date] = u
    return WindSeries(samples)


def load_wind(path: Path | str) -> WindSeries:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ManifestError(f"cannot read wind file {path}: {exc}") from None
    return parse_wind_csv(text)


@dataclass(frozen=True)
class EventRow:
    """One literature-defined event date plus its comparison window."""

    definition: str
    event_date: dt.date
    window_start: dt.date
    window_end: dt.date


@dataclass(frozen=True)
class EventList:
    rows: tuple[EventRow, ...]


def parse_events_csv(text: str) -> EventList:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    expected = ["definition", "event_date", "window_start", "window_end"]
    if header is None or [h.strip() for h in header] != expected:
        raise ManifestError(f"expected header {','.join(expected)!r}, got {header}")
    rows: list[EventRow] = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise ManifestError(f"events line {lineno}: expected 4 columns")
        definition = row[0].strip()
        if not definition:
            raise ManifestError(f"events line {lineno}: empty definition label")
        event = _parse_date(row[1], f"events line {lineno}")
        start = _parse_date(row[2], f"events line {lineno}")
        end = _parse_date(row[3], f"events line {lineno}")
        if not (start <= event <= end):
            raise ManifestError(
                f"events line {lineno}: window must satisfy "
                f"window_start <= event_date <= window_end"
            )
        rows.append(EventRow(definition, event, start, end))
    return EventList(tuple(rows))


def load_events(path: Path | str) -> EventList:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ManifestError(f"cannot read events file {path}: {exc}") from None
    return parse_events_csv(text)
