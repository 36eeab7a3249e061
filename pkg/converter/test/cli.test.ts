import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { main } from "../src/cli";

const MAIN = path.join(__dirname, "fixtures", "fixture_main.nc");

let outDir: string;
let stdout: string[];
let stderr: string[];

beforeEach(() => {
  outDir = fs.mkdtempSync(path.join(os.tmpdir(), "ncconv-cli-"));
  stdout = [];
  stderr = [];
  vi.spyOn(process.stdout, "write").mockImplementation((s) => {
    stdout.push(String(s));
    return true;
  });
  vi.spyOn(process.stderr, "write").mockImplementation((s) => {
    stderr.push(String(s));
    return true;
  });
});
afterEach(() => {
  vi.restoreAllMocks();
  fs.rmSync(outDir, { recursive: true, force: true });
});

describe("nc-convert CLI", () => {
  it("converts with explicit levels and reports what it wrote", () => {
    const code = main([
      "--in", MAIN, "--var", "z", "--levels", "10,50",
      "--out", outDir, "--divide-by-gravity",
    ]);
    expect(code).toBe(0);
    expect(stdout.join("")).toContain("6 field file(s)");
    expect(fs.existsSync(path.join(outDir, "manifest.csv"))).toBe(true);
  });

  it("extracts wind when asked", () => {
    const code = main([
      "--in", MAIN, "--var", "z", "--out", outDir, "--wind-var", "u",
    ]);
    expect(code).toBe(0);
    expect(fs.existsSync(path.join(outDir, "wind.csv"))).toBe(true);
  });

  it("requires the mandatory flags", () => {
    expect(main(["--var", "z"])).toBe(2);
    expect(stderr.join("")).toContain("--in, --var and --out are required");
  });

  it("rejects malformed levels", () => {
    expect(
      main(["--in", MAIN, "--var", "z", "--out", outDir, "--levels", "10,abc"])
    ).toBe(2);
  });

  it("surfaces conversion errors with exit 1", () => {
    expect(main(["--in", MAIN, "--var", "nope", "--out", outDir])).toBe(1);
    expect(stderr.join("")).toContain("variable 'nope' not found");
  });

  it("prints usage on --help", () => {
    expect(main(["--help"])).toBe(0);
    expect(stdout.join("")).toContain("usage: nc-convert");
  });
});
