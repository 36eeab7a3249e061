/**
 * Extract daily NH fields from a classic NetCDF reanalysis file into SPPV
 * files plus a manifest, and optionally a 60N zonal-mean wind CSV.
 */

import * as fs from "fs";
import * as path from "path";

import { NetcdfError, NetcdfFile, openNetcdf } from "./netcdf";
import { Field, writeSppv } from "./sppv";

export const STANDARD_GRAVITY = 9.80665; // m/s^2

const LAT_NAMES = ["lat", "latitude", "g0_lat_2", "y"];
const LON_NAMES = ["lon", "longitude", "g0_lon_3", "x"];
const LEVEL_NAMES = ["level", "lev", "plev", "pressure_level", "isobaricInhPa"];
const TIME_NAMES = ["time", "valid_time", "date"];

export interface ConvertJob {
  inputs: string[];
  variable: string;
  /** Pressure levels (hPa) to extract; the reanalysis default trio. */
  levels: number[];
  outDir: string;
  /** Divide values by standard gravity (geopotential m^2/s^2 -> meters). */
  divideByGravity: boolean;
  windVariable?: string;
}

export interface ConvertResult {
  fieldFiles: string[];
  manifestPath: string;
  windPath?: string;
}

export const DEFAULT_LEVELS = [10, 50, 100];

interface Coords {
  timeName: string;
  levelName: string;
  latName: string;
  lonName: string;
  dates: string[];
  levels: number[];
  lats: number[];
  lons: number[];
}

function findDimension(nc: NetcdfFile, candidates: string[], what: string): string {
  for (const d of nc.dims) {
    if (candidates.includes(d.name.toLowerCase())) return d.name;
  }
  throw new NetcdfError(
    `no ${what} dimension found (looked for ${candidates.join("/")}; ` +
    `file has: ${nc.dims.map((d) => d.name).join(", ")})`
  );
}

function coordValues(nc: NetcdfFile, dimName: string): number[] {
  nc.requireVariable(dimName); // coordinate variable must exist
  return Array.from(nc.readVariable(dimName));
}

/** "hours since 1900-01-01 00:00:00.0" and friends -> ISO dates. */
export function decodeTimes(units: string, values: number[]): string[] {
  const match = units.match(
    /^(seconds|hours|days)\s+since\s+(\d{4})-(\d{1,2})-(\d{1,2})/i
  );
  if (!match) {
    throw new NetcdfError(`cannot parse time units '${units}'`);
  }
  const unitMs = { seconds: 1000, hours: 3600_000, days: 86_400_000 }[
    match[1].toLowerCase() as "seconds" | "hours" | "days"
  ];
  const epoch = Date.UTC(Number(match[2]), Number(match[3]) - 1, Number(match[4]));
  return values.map((v) => {
    const d = new Date(epoch + v * unitMs);
    return d.toISOString().slice(0, 10);
  });
}

function readCoords(nc: NetcdfFile, variable: string): Coords {
  const dimNames = nc.dimensionNames(variable).map((n) => n.toLowerCase());
  for (const [what, names] of [
    ["time", TIME_NAMES],
    ["level", LEVEL_NAMES],
    ["latitude", LAT_NAMES],
    ["longitude", LON_NAMES],
  ] as const) {
    if (!dimNames.some((n) => names.includes(n))) {
      throw new NetcdfError(
        `variable '${variable}' lacks a ${what} dimension (has: ${dimNames.join(", ")})`
      );
    }
  }
  const expected = [TIME_NAMES, LEVEL_NAMES, LAT_NAMES, LON_NAMES];
  const actual = nc.dimensionNames(variable);
  expected.forEach((names, idx) => {
    if (!names.includes(actual[idx].toLowerCase())) {
      throw new NetcdfError(
        `variable '${variable}' must be ordered (time, level, lat, lon); got (${actual.join(", ")})`
      );
    }
  });
  const [timeName, levelName, latName, lonName] = actual;
  const timeUnits = nc.attribute(timeName, "units");
  if (!timeUnits || typeof timeUnits.values !== "string") {
    throw new NetcdfError(`time variable '${timeName}' has no units attribute`);
  }
  return {
    timeName,
    levelName,
    latName,
    lonName,
    dates: decodeTimes(timeUnits.values, coordValues(nc, timeName)),
    levels: coordValues(nc, levelName),
    lats: coordValues(nc, latName),
    lons: coordValues(nc, lonName),
  };
}

interface GridOrder {
  latIndex: number[]; // source row index per output row (ascending NH lats)
  lonIndex: number[]; // source col index per output col (ascending [0,360) lons)
  lats: number[];
  lons: number[];
}

/**
 * Keep NH rows only and normalize axes: latitudes ascending (reanalysis
 * files usually come 90..0) and longitudes mapped into [0,360) ascending.
 */
export function gridOrder(lats: number[], lons: number[]): GridOrder {
  const latIdx = lats
    .map((lat, i) => ({ lat, i }))
    .filter(({ lat }) => lat >= 0)
    .sort((a, b) => a.lat - b.lat);
  if (latIdx.length < 3) {
    throw new NetcdfError(
      `only ${latIdx.length} northern-hemisphere latitude rows; need at least 3`
    );
  }
  const lonIdx = lons
    .map((lon, i) => ({ lon: ((lon % 360) + 360) % 360, i }))
    .sort((a, b) => a.lon - b.lon);
  return {
    latIndex: latIdx.map(({ i }) => i),
    lonIndex: lonIdx.map(({ i }) => i),
    lats: latIdx.map(({ lat }) => lat),
    lons: lonIdx.map(({ lon }) => lon),
  };
}

function formatPressure(p: number): string {
  return `${p}`;
}

export function fieldFileName(date: string, pressure: number): string {
  return `${date}_${formatPressure(pressure)}hpa.sppv`;
}

function extractField(
  data: Float64Array,
  shape: number[],
  t: number,
  l: number,
  order: GridOrder,
  divisor: number
): Field {
  const [, , nlat, nlon] = shape;
  const nOutLat = order.latIndex.length;
  const nOutLon = order.lonIndex.length;
  const values = new Float64Array(nOutLat * nOutLon);
  const base = (t * shape[1] + l) * nlat * nlon;
  for (let i = 0; i < nOutLat; i++) {
    const srcRow = base + order.latIndex[i] * nlon;
    for (let j = 0; j < nOutLon; j++) {
      const v = data[srcRow + order.lonIndex[j]] / divisor;
      if (!Number.isFinite(v)) {
        throw new NetcdfError(
          `non-finite value at lat=${order.lats[i]} lon=${order.lons[j]}`
        );
      }
      values[i * nOutLon + j] = v;
    }
  }
  return {
    lats: Float64Array.from(order.lats),
    lons: Float64Array.from(order.lons),
    values,
  };
}

function appendCsv(filePath: string, header: string, rows: string[]): void {
  const exists = fs.existsSync(filePath);
  const body = rows.map((r) => r + "\n").join("");
  if (exists) {
    fs.appendFileSync(filePath, body);
  } else {
    fs.writeFileSync(filePath, header + "\n" + body);
  }
}

/** Zonal-mean of a (time, level, lat, lon) wind variable at the NH row
 * closest to 60N, at the level closest to 10 hPa among those requested. */
function extractWind(
  nc: NetcdfFile,
  variable: string,
  coords: Coords,
  levels: number[]
): Map<string, number> {
  const v = nc.requireVariable(variable);
  const dims = nc.dimensionNames(variable);
  if (dims.join(",") !== [coords.timeName, coords.levelName, coords.latName, coords.lonName].join(",")) {
    throw new NetcdfError(
      `wind variable '${variable}' must share the (time, level, lat, lon) grid`
    );
  }
  const target = levels.reduce((a, b) => (Math.abs(a - 10) <= Math.abs(b - 10) ? a : b));
  const l = coords.levels.indexOf(target);
  const latRow = coords.lats.reduce(
    (best, lat, i) => (Math.abs(lat - 60) < Math.abs(coords.lats[best] - 60) ? i : best),
    0
  );
  const data = nc.readVariable(variable);
  const [_, nLev, nLat, nLon] = nc.shape(variable);
  const out = new Map<string, number>();
  coords.dates.forEach((date, t) => {
    const base = ((t * nLev + l) * nLat + latRow) * nLon;
    let sum = 0;
    for (let j = 0; j < nLon; j++) sum += data[base + j];
    out.set(date, sum / nLon);
  });
  return out;
}

export function convert(job: ConvertJob): ConvertResult {
  fs.mkdirSync(job.outDir, { recursive: true });
  const manifestPath = path.join(job.outDir, "manifest.csv");
  const fieldFiles: string[] = [];
  let windPath: string | undefined;

  for (const input of job.inputs) {
    const nc = openNetcdf(fs.readFileSync(input));
    const coords = readCoords(nc, job.variable);
    const order = gridOrder(coords.lats, coords.lons);
    for (const level of job.levels) {
      if (!coords.levels.includes(level)) {
        throw new NetcdfError(
          `level ${level} hPa not in file (has: ${coords.levels.join(", ")})`
        );
      }
    }
    const data = nc.readVariable(job.variable);
    const shape = nc.shape(job.variable);
    const divisor = job.divideByGravity ? STANDARD_GRAVITY : 1.0;
    const manifestRows: string[] = [];
    coords.dates.forEach((date, t) => {
      for (const level of job.levels) {
        const l = coords.levels.indexOf(level);
        const field = extractField(data, shape, t, l, order, divisor);
        const name = fieldFileName(date, level);
        fs.writeFileSync(path.join(job.outDir, name), writeSppv(field));
        fieldFiles.push(name);
        manifestRows.push(`${date},${formatPressure(level)},${name}`);
      }
    });
    appendCsv(manifestPath, "date,pressure_hpa,path", manifestRows);

    if (job.windVariable) {
      const wind = extractWind(nc, job.windVariable, coords, job.levels);
      windPath = path.join(job.outDir, "wind.csv");
      appendCsv(
        windPath,
        "date,u_ms",
        [...wind.entries()].map(([date, u]) => `${date},${u}`)
      );
    }
  }
  return { fieldFiles, manifestPath, windPath };
}
