/**
 * Minimal classic NetCDF (CDF-1 / CDF-2) reader.
 *
 * Covers what reanalysis extracts need: dimensions, attributes, fixed and
 * record variables of the numeric XDR types, and CF-style scale_factor /
 * add_offset unpacking. NetCDF-4 (HDF5) containers are not supported;
 * convert those with `nccopy -k classic` first.
 */

const NC_DIMENSION = 0x0a;
const NC_VARIABLE = 0x0b;
const NC_ATTRIBUTE = 0x0c;

export const NC_TYPES: Record<number, { name: string; size: number }> = {
  1: { name: "byte", size: 1 },
  2: { name: "char", size: 1 },
  3: { name: "short", size: 2 },
  4: { name: "int", size: 4 },
  5: { name: "float", size: 4 },
  6: { name: "double", size: 8 },
};

export interface NcDim {
  name: string;
  length: number;
  isRecord: boolean;
}

export interface NcAttribute {
  name: string;
  type: number;
  /** Numeric payload, or the decoded string for char attributes. */
  values: number[] | string;
}

export interface NcVariable {
  name: string;
  dimids: number[];
  attributes: Map<string, NcAttribute>;
  type: number;
  /** Per-record byte size (padded) for record vars, total otherwise. */
  vsize: number;
  begin: number;
  isRecord: boolean;
}

export class NetcdfError extends Error {}

class Cursor {
  offset = 0;
  constructor(readonly view: DataView) {}

  u32(): number {
    const v = this.view.getUint32(this.offset, false);
    this.offset += 4;
    return v;
  }

  u64(): number {
    const v = this.view.getBigUint64(this.offset, false);
    this.offset += 8;
    return Number(v);
  }

  name(): string {
    const len = this.u32();
    const bytes = new Uint8Array(this.view.buffer, this.view.byteOffset + this.offset, len);
    this.offset += len + pad4(len) - len;
    return new TextDecoder().decode(bytes);
  }
}

function pad4(n: number): number {
  return (n + 3) & ~3;
}

export class NetcdfFile {
  readonly version: number;
  readonly numrecs: number;
  readonly dims: NcDim[] = [];
  readonly globalAttributes = new Map<string, NcAttribute>();
  readonly variables = new Map<string, NcVariable>();
  private readonly view: DataView;
  private readonly recsize: number;

  constructor(data: Uint8Array) {
    this.view = new DataView(data.buffer, data.byteOffset, data.byteLength);
    if (data.length < 8 || data[0] !== 0x43 || data[1] !== 0x44 || data[2] !== 0x46) {
      throw new NetcdfError("not a classic NetCDF file (missing CDF magic)");
    }
    this.version = data[3];
    if (this.version !== 1 && this.version !== 2) {
      throw new NetcdfError(
        `unsupported NetCDF variant ${this.version}; only classic CDF-1/CDF-2 ` +
        "(convert NetCDF-4 with: nccopy -k classic in.nc out.nc)"
      );
    }
    const cur = new Cursor(this.view);
    cur.offset = 4;
    this.numrecs = cur.u32(); // 0xFFFFFFFF = streaming; treated as 0 records known

    this.readDims(cur);
    this.readAttributes(cur, this.globalAttributes);
    this.readVariables(cur);

    let recsize = 0;
    let recordVars = 0;
    for (const v of this.variables.values()) {
      if (v.isRecord) {
        recordVars += 1;
        recsize += v.vsize;
      }
    }
    // Special case from the format spec: a single small-typed record
    // variable packs records without padding.
    if (recordVars === 1) {
      for (const v of this.variables.values()) {
        if (v.isRecord && NC_TYPES[v.type].size < 4) {
          recsize = this.perRecordElements(v) * NC_TYPES[v.type].size;
        }
      }
    }
    this.recsize = recsize;
  }

  private readDims(cur: Cursor): void {
    const tag = cur.u32();
    const count = cur.u32();
    if (tag !== NC_DIMENSION && !(tag === 0 && count === 0)) {
      throw new NetcdfError("malformed dimension list");
    }
    for (let i = 0; i < count; i++) {
      const name = cur.name();
      const length = cur.u32();
      this.dims.push({ name, length, isRecord: length === 0 });
    }
  }

  private readAttributes(cur: Cursor, into: Map<string, NcAttribute>): void {
    const tag = cur.u32();
    const count = cur.u32();
    if (tag !== NC_ATTRIBUTE && !(tag === 0 && count === 0)) {
      throw new NetcdfError("malformed attribute list");
    }
    for (let i = 0; i < count; i++) {
      const name = cur.name();
      const type = cur.u32();
      const n = cur.u32();
      const info = NC_TYPES[type];
      if (!info) throw new NetcdfError(`attribute ${name}: unknown type ${type}`);
      if (type === 2) {
        const bytes = new Uint8Array(
          this.view.buffer, this.view.byteOffset + cur.offset, n
        );
        cur.offset += pad4(n);
        into.set(name, { name, type, values: new TextDecoder().decode(bytes) });
      } else {
        const values: number[] = [];
        for (let k = 0; k < n; k++) {
          values.push(this.readScalar(type, cur.offset));
          cur.offset += info.size;
        }
        cur.offset += pad4(n * info.size) - n * info.size;
        into.set(name, { name, type, values });
      }
    }
  }

  private readVariables(cur: Cursor): void {
    const tag = cur.u32();
    const count = cur.u32();
    if (tag !== NC_VARIABLE && !(tag === 0 && count === 0)) {
      throw new NetcdfError("malformed variable list");
    }
    for (let i = 0; i < count; i++) {
      const name = cur.name();
      const ndims = cur.u32();
      const dimids: number[] = [];
      for (let k = 0; k < ndims; k++) dimids.push(cur.u32());
      const attributes = new Map<string, NcAttribute>();
      this.readAttributes(cur, attributes);
      const type = cur.u32();
      if (!NC_TYPES[type]) {
        throw new NetcdfError(`variable ${name}: unknown type ${type}`);
      }
      const vsize = cur.u32();
      const begin = this.version === 1 ? cur.u32() : cur.u64();
      const isRecord = dimids.some((d) => this.dims[d].isRecord);
      this.variables.set(name, { name, dimids, attributes, type, vsize, begin, isRecord });
    }
  }

  private readScalar(type: number, offset: number): number {
    switch (type) {
      case 1: return this.view.getInt8(offset);
      case 2: return this.view.getUint8(offset);
      case 3: return this.view.getInt16(offset, false);
      case 4: return this.view.getInt32(offset, false);
      case 5: return this.view.getFloat32(offset, false);
      case 6: return this.view.getFloat64(offset, false);
      default: throw new NetcdfError(`unknown type ${type}`);
    }
  }

  private perRecordElements(v: NcVariable): number {
    let n = 1;
    for (const d of v.dimids) {
      if (!this.dims[d].isRecord) n *= this.dims[d].length;
    }
    return n;
  }

  /** Dimension lengths of the variable, record dim expanded to numrecs. */
  shape(name: string): number[] {
    const v = this.requireVariable(name);
    return v.dimids.map((d) =>
      this.dims[d].isRecord ? this.numrecs : this.dims[d].length
    );
  }

  dimensionNames(name: string): string[] {
    return this.requireVariable(name).dimids.map((d) => this.dims[d].name);
  }

  requireVariable(name: string): NcVariable {
    const v = this.variables.get(name);
    if (!v) {
      const known = [...this.variables.keys()].join(", ");
      throw new NetcdfError(`variable '${name}' not found (file has: ${known})`);
    }
    return v;
  }

  attribute(varName: string, attName: string): NcAttribute | undefined {
    return this.requireVariable(varName).attributes.get(attName);
  }

  /**
   * Full variable contents as Float64Array in header dimension order,
   * with scale_factor / add_offset applied when present.
   */
  readVariable(name: string): Float64Array {
    const v = this.requireVariable(name);
    const info = NC_TYPES[v.type];
    const perRec = this.perRecordElements(v);
    const out = v.isRecord
      ? new Float64Array(perRec * this.numrecs)
      : new Float64Array(perRec);
    if (v.isRecord) {
      for (let r = 0; r < this.numrecs; r++) {
        const base = v.begin + r * this.recsize;
        for (let k = 0; k < perRec; k++) {
          out[r * perRec + k] = this.readScalar(v.type, base + k * info.size);
        }
      }
    } else {
      for (let k = 0; k < perRec; k++) {
        out[k] = this.readScalar(v.type, v.begin + k * info.size);
      }
    }
    const scaleAtt = v.attributes.get("scale_factor");
    const offsetAtt = v.attributes.get("add_offset");
    const scale = scaleAtt ? (scaleAtt.values as number[])[0] : 1.0;
    const offset = offsetAtt ? (offsetAtt.values as number[])[0] : 0.0;
    if (scale !== 1.0 || offset !== 0.0) {
      for (let k = 0; k < out.length; k++) out[k] = out[k] * scale + offset;
    }
    return out;
  }
}

export function openNetcdf(data: Uint8Array): NetcdfFile {
  try {
    return new NetcdfFile(data);
  } catch (err) {
    if (err instanceof RangeError) {
      throw new NetcdfError("truncated or corrupt NetCDF header");
    }
    throw err;
  }
}
