/**
 * Cross-component checks: the primary `sppv` CLI must parse what the
 * converter writes, with values intact, and a converted manifest must
 * drive a successful `series` run. Requires the primary package to be
 * installed (override the binary with SPPV_BIN if needed).
 */

import { spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { convert } from "../src/convert";
import { gphAt } from "./netcdf.test";

const SPPV = process.env.SPPV_BIN ?? "sppv";
const MAIN = path.join(__dirname, "fixtures", "fixture_main.nc");
const SRC_ROW = [3, 2, 1, 0];

let outDir: string;
beforeEach(() => {
  outDir = fs.mkdtempSync(path.join(os.tmpdir(), "ncconv-int-"));
  convert({
    inputs: [MAIN],
    variable: "z",
    levels: [10, 50, 100],
    outDir,
    divideByGravity: true,
    windVariable: "u",
  });
});
afterEach(() => {
  fs.rmSync(outDir, { recursive: true, force: true });
});

function sppv(...args: string[]) {
  const run = spawnSync(SPPV, args, { encoding: "utf-8" });
  if (run.error) {
    throw new Error(
      `cannot run '${SPPV}' (${run.error.message}); install the primary ` +
      "package or set SPPV_BIN"
    );
  }
  return run;
}

describe("primary component round-trip", () => {
  it("parses converted fields with values matching the source", () => {
    const run = sppv(
      "pairs", "--input", path.join(outDir, "1987-12-05_10hpa.sppv"),
      "--topology", "grid", "--dump-complex"
    );
    expect(run.status).toBe(0);
    const lines = run.stdout.trim().split("\n");
    expect(lines[0]).toBe("dim,height,v0,v1,v2");
    // grid-complex vertices are the field values, row-major by latitude
    const heights = lines
      .filter((l) => l.startsWith("0,"))
      .map((l) => Number(l.split(",")[1]));
    expect(heights).toHaveLength(4 * 8);
    for (let r = 0; r < 4; r++) {
      for (let j = 0; j < 8; j++) {
        const want = gphAt(1, 0, SRC_ROW[r], j);
        const got = heights[r * 8 + j];
        expect(Math.abs(got - want) / want).toBeLessThan(1e-9);
      }
    }
  });

  it("scores a converted day", () => {
    const run = sppv(
      "score", "--input", path.join(outDir, "1987-12-06_10hpa.sppv")
    );
    expect(run.status).toBe(0);
    const day = JSON.parse(run.stdout);
    // the fixture's dip is 800 m deep on this day and sits off the pole
    expect(day.h_cyl).toBeGreaterThan(700);
    expect(day.degenerate).toBe(false);
  });

  it("drives a series run from the converted manifest", () => {
    const outCsv = path.join(outDir, "series.csv");
    const outSvg = path.join(outDir, "series.svg");
    const run = sppv(
      "series", "--manifest", path.join(outDir, "manifest.csv"),
      "--date", "1987-12-05", "--before", "1", "--after", "1",
      "--pressure", "10", "--wind", path.join(outDir, "wind.csv"),
      "--out-csv", outCsv, "--out-svg", outSvg
    );
    expect(run.status).toBe(0);
    const csv = fs.readFileSync(outCsv, "utf-8").trim().split("\n");
    expect(csv).toHaveLength(4); // header + 3 days
    expect(csv[1].startsWith("1987-12-04,10.0,")).toBe(true);
    // wind was negative on the first fixture day
    expect(csv[1].endsWith(",true")).toBe(true);
    expect(fs.readFileSync(outSvg, "utf-8").startsWith("<svg")).toBe(true);
  });
});
