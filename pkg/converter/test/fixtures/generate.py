#!/usr/bin/env python3
"""Regenerate the classic-NetCDF test fixtures (requires scipy).

fixture_main.nc   3 days x 3 levels x 5 lats (descending, one SH row) x 8 lons:
                  z       f64 geopotential (m^2/s^2) = g * gph
                  zpacked i16 gph packed with scale_factor=0.5, add_offset=30000
                  u       f32 wind with a known 60N zonal mean
fixture_lons.nc   longitudes [-90, 0, 90, 180] to exercise remapping into [0,360)
"""

import datetime as dt
from pathlib import Path

import numpy as np
from scipy.io import netcdf_file

HERE = Path(__file__).parent
G = 9.80665


def gph(t, l, i, j):
    dip = 600 + 100 * t if (i, j) == (2, 2) else 0
    return 30000 + 1000 * t + 100 * l + 10 * i + j - dip


def hours_since_1900(date):
    return (date - dt.date(1900, 1, 1)).days * 24.0


def write_main():
    with netcdf_file(HERE / "fixture_main.nc", "w") as f:
        f.createDimension("time", None)
        f.createDimension("level", 3)
        f.createDimension("lat", 5)
        f.createDimension("lon", 8)

        time = f.createVariable("time", "d", ("time",))
        time.units = b"hours since 1900-01-01 00:00:00.0"
        dates = [dt.date(1987, 12, 4) + dt.timedelta(days=k) for k in range(3)]
        time[:] = [hours_since_1900(d) for d in dates]

        level = f.createVariable("level", "i", ("level",))
        level.units = b"millibars"
        level[:] = [10, 50, 100]

        lat = f.createVariable("lat", "d", ("lat",))
        lat.units = b"degrees_north"
        lat[:] = [90.0, 60.0, 30.0, 0.0, -30.0]

        lon = f.createVariable("lon", "d", ("lon",))
        lon.units = b"degrees_east"
        lon[:] = np.arange(8) * 45.0

        shape = (3, 3, 5, 8)
        heights = np.fromfunction(np.vectorize(gph), shape)

        z = f.createVariable("z", "d", ("time", "level", "lat", "lon"))
        z.units = b"m**2 s**-2"
        z[:] = G * heights

        zpacked = f.createVariable("zpacked", "h", ("time", "level", "lat", "lon"))
        zpacked.scale_factor = 0.5
        zpacked.add_offset = 30000.0
        zpacked[:] = (2 * (heights - 30000)).astype(np.int16)

        u = f.createVariable("u", "f", ("time", "level", "lat", "lon"))
        u.units = b"m s**-1"
        uvals = np.zeros(shape, dtype=np.float32)
        for t in range(3):
            for j in range(8):
                uvals[t, :, :, j] = (t - 1) * 5.0 + (j % 2)
        u[:] = uvals


def write_lons():
    with netcdf_file(HERE / "fixture_lons.nc", "w") as f:
        f.createDimension("time", None)
        f.createDimension("level", 1)
        f.createDimension("lat", 3)
        f.createDimension("lon", 4)
        time = f.createVariable("time", "d", ("time",))
        time.units = b"days since 2000-01-01"
        time[:] = [0.0]
        level = f.createVariable("level", "i", ("level",))
        level[:] = [10]
        lat = f.createVariable("lat", "d", ("lat",))
        lat[:] = [0.0, 30.0, 60.0]
        lon = f.createVariable("lon", "d", ("lon",))
        lon[:] = [-90.0, 0.0, 90.0, 180.0]
        gh = f.createVariable("gh", "d", ("time", "level", "lat", "lon"))
        gh[:] = np.fromfunction(lambda t, l, i, j: 10 * i + j, (1, 1, 3, 4))


if __name__ == "__main__":
    write_main()
    write_lons()
    print("fixtures written to", HERE)
