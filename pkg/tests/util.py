"""Shared test helpers: random field generators and tiny builders."""

import datetime as dt

import numpy as np

from sppv.field import GphField

DATE = dt.date(2000, 1, 1)


def uniform_field(rng, nlat, nlon, include_pole=True, lo=100.0, hi=900.0):
    top = 90.0 if include_pole else 85.0
    lats = np.linspace(0.0, top, nlat)
    lons = np.linspace(0.0, 360.0, nlon, endpoint=False)
    values = rng.uniform(lo, hi, (nlat, nlon))
    return GphField(DATE, 10.0, lats, lons, values)


def multi_basin_field(rng, nlat, nlon, include_pole=True):
    """Random sum of tent depressions plus mild noise: several local basins."""
    top = 90.0 if include_pole else 85.0
    lats = np.linspace(0.0, top, nlat)
    lons = np.linspace(0.0, 360.0, nlon, endpoint=False)
    lat_g, lon_g = np.meshgrid(lats, lons, indexing="ij")
    values = np.full(lat_g.shape, 500.0)
    for _ in range(rng.integers(1, 4)):
        clat = rng.uniform(0.0, 90.0)
        clon = rng.uniform(0.0, 360.0)
        depth = rng.uniform(50.0, 400.0)
        radius = rng.uniform(15.0, 60.0)
        d = _gc_deg(lat_g, lon_g, clat, clon)
        values = values - depth * np.maximum(0.0, 1.0 - d / radius)
    values = values + rng.uniform(-20.0, 20.0, values.shape)
    return GphField(DATE, 10.0, lats, lons, values)


def random_field(rng, nlat=None, nlon=None):
    """Uniform or multi-basin field of a random (or given) size."""
    nlat = int(nlat if nlat is not None else rng.integers(4, 13))
    nlon = int(nlon if nlon is not None else rng.integers(6, 17))
    include_pole = bool(rng.integers(0, 2))
    if rng.integers(0, 2):
        return uniform_field(rng, nlat, nlon, include_pole)
    return multi_basin_field(rng, nlat, nlon, include_pole)


def _gc_deg(lat1, lon1, lat2, lon2):
    p1, l1, p2, l2 = (np.radians(x) for x in (lat1, lon1, lat2, lon2))
    c = np.sin(p1) * np.sin(p2) + np.cos(p1) * np.cos(p2) * np.cos(l1 - l2)
    return np.degrees(np.arccos(np.clip(c, -1.0, 1.0)))


def field_csv_text(lats, lons, values, shuffle_rng=None, skip=None):
    """Build a lat,lon,value CSV, optionally shuffled or with a cell omitted."""
    rows = []
    for i, lat in enumerate(lats):
        for j, lon in enumerate(lons):
            if skip is not None and skip == (lat, lon):
                continue
            rows.append(f"{lat},{lon},{values[i][j]}")
    if shuffle_rng is not None:
        shuffle_rng.shuffle(rows)
    return "lat,lon,value\n" + "\n".join(rows) + "\n"
