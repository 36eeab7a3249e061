/**
 * SPPV binary field format: magic "SPPV", version u16 = 1, nlat u32,
 * nlon u32, then latitudes, longitudes, and row-major (latitude-major)
 * values, all little-endian f64.
 */

export interface Field {
  lats: Float64Array;
  lons: Float64Array;
  /** Row-major, rows by latitude: values[i * nlon + j]. */
  values: Float64Array;
}

const MAGIC = [0x53, 0x50, 0x50, 0x56]; // "SPPV"
const VERSION = 1;
const HEADER_BYTES = 14;

export function writeSppv(field: Field): Uint8Array {
  const nlat = field.lats.length;
  const nlon = field.lons.length;
  if (field.values.length !== nlat * nlon) {
    throw new Error(`values length ${field.values.length} != ${nlat}x${nlon}`);
  }
  const total = HEADER_BYTES + 8 * (nlat + nlon + nlat * nlon);
  const out = new Uint8Array(total);
  const view = new DataView(out.buffer);
  out.set(MAGIC, 0);
  view.setUint16(4, VERSION, true);
  view.setUint32(6, nlat, true);
  view.setUint32(10, nlon, true);
  let off = HEADER_BYTES;
  for (const arr of [field.lats, field.lons, field.values]) {
    for (const x of arr) {
      view.setFloat64(off, x, true);
      off += 8;
    }
  }
  return out;
}

export function readSppv(data: Uint8Array): Field {
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  for (let i = 0; i < 4; i++) {
    if (data[i] !== MAGIC[i]) throw new Error("bad magic: not an SPPV file");
  }
  if (view.getUint16(4, true) !== VERSION) {
    throw new Error("unsupported SPPV version");
  }
  const nlat = view.getUint32(6, true);
  const nlon = view.getUint32(10, true);
  const expected = HEADER_BYTES + 8 * (nlat + nlon + nlat * nlon);
  if (data.byteLength !== expected) {
    throw new Error(`SPPV size mismatch: expected ${expected}, got ${data.byteLength}`);
  }
  const slice = (start: number, n: number) => {
    const arr = new Float64Array(n);
    for (let k = 0; k < n; k++) arr[k] = view.getFloat64(start + 8 * k, true);
    return arr;
  };
  return {
    lats: slice(HEADER_BYTES, nlat),
    lons: slice(HEADER_BYTES + 8 * nlat, nlon),
    values: slice(HEADER_BYTES + 8 * (nlat + nlon), nlat * nlon),
  };
}
