#!/usr/bin/env node
/**
 * nc-convert: classic NetCDF reanalysis files -> SPPV fields + manifest.
 *
 *   nc-convert --in era5.nc --var z --levels 10,50,100 --out fields/ \
 *       --divide-by-gravity --wind-var u
 */

import { parseArgs } from "node:util";

import { convert, DEFAULT_LEVELS } from "./convert";

const USAGE = `usage: nc-convert --in <file.nc> [--in <more.nc> ...] --var <name> --out <dir>
                  [--levels 10,50,100] [--wind-var <name>] [--divide-by-gravity]

options:
  --in                 input classic NetCDF file (repeatable)
  --var                variable holding (time, level, lat, lon) heights
  --out                output directory (SPPV files + manifest.csv)
  --levels             comma-separated pressure levels in hPa (default ${DEFAULT_LEVELS.join(",")})
  --wind-var           also extract this wind variable's 60N zonal mean to wind.csv
  --divide-by-gravity  input is geopotential (m^2/s^2); divide by 9.80665
  --help               show this message
`;

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        in: { type: "string", multiple: true },
        var: { type: "string" },
        out: { type: "string" },
        levels: { type: "string" },
        "wind-var": { type: "string" },
        "divide-by-gravity": { type: "boolean", default: false },
        help: { type: "boolean", default: false },
      },
      allowPositionals: false,
    });
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  const opts = parsed.values;
  if (opts.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  if (!opts.in?.length || !opts.var || !opts.out) {
    process.stderr.write(`error: --in, --var and --out are required\n${USAGE}`);
    return 2;
  }
  let levels = DEFAULT_LEVELS;
  if (opts.levels) {
    levels = opts.levels.split(",").map((s) => Number(s.trim()));
    if (levels.some((x) => !Number.isFinite(x) || x <= 0)) {
      process.stderr.write(`error: bad --levels '${opts.levels}'\n`);
      return 2;
    }
  }
  try {
    const result = convert({
      inputs: opts.in,
      variable: opts.var,
      levels,
      outDir: opts.out,
      divideByGravity: opts["divide-by-gravity"] ?? false,
      windVariable: opts["wind-var"],
    });
    process.stdout.write(
      `wrote ${result.fieldFiles.length} field file(s) and ${result.manifestPath}\n`
    );
    if (result.windPath) {
      process.stdout.write(`wrote ${result.windPath}\n`);
    }
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
