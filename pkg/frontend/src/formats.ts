/**
 * Readers for the solver's output files: binary snapshots (JSON header +
 * raw float64 payload, x axis fastest), CSV series, and report JSON.
 * This component only reads; it never recomputes physics.
 */

import { readFileSync } from "node:fs";

export interface SnapshotHeader {
  format_version: number;
  endianness: string;
  lengths: number[];
  counts: number[];
  time: number;
  payload_bytes: number;
}

export interface Snapshot {
  header: SnapshotHeader;
  /** |u| is not stored; re/im are, in grid index order [ix][iy][iz]. */
  re: Float64Array;
  im: Float64Array;
  counts: number[];
  lengths: number[];
  time: number;
}

/** Flat index with x fastest on disk -> grid-order (x slowest) index. */
function diskToGrid(counts: number[]): (k: number) => number {
  // disk order iterates x fastest: k = ix + Nx*(iy + Ny*iz) for 3-d
  // grid order: g = iz + Nz*(iy + Ny*ix)   (row-major in [ix][iy][iz])
  if (counts.length === 1) return (k) => k;
  if (counts.length === 2) {
    const [nx, ny] = counts;
    return (k) => {
      const ix = k % nx;
      const iy = Math.floor(k / nx);
      return iy + ny * ix;
    };
  }
  const [nx, ny, nz] = counts;
  return (k) => {
    const ix = k % nx;
    const iy = Math.floor(k / nx) % ny;
    const iz = Math.floor(k / (nx * ny));
    return iz + nz * (iy + ny * ix);
  };
}

export function readSnapshot(path: string): Snapshot {
  const header = JSON.parse(readFileSync(path + ".json", "utf8")) as SnapshotHeader;
  if (header.format_version !== 1) {
    throw new Error(`unsupported snapshot format version ${header.format_version}`);
  }
  const payload = readFileSync(path);
  const n = header.counts.reduce((a, b) => a * b, 1);
  if (payload.byteLength !== n * 16 || header.payload_bytes !== n * 16) {
    throw new Error(
      `payload size ${payload.byteLength} does not match header geometry (${n * 16})`,
    );
  }
  const view = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
  const re = new Float64Array(n);
  const im = new Float64Array(n);
  const map = diskToGrid(header.counts);
  for (let k = 0; k < n; k++) {
    const g = map(k);
    re[g] = view.getFloat64(16 * k, true);
    im[g] = view.getFloat64(16 * k + 8, true);
  }
  return {
    header,
    re,
    im,
    counts: header.counts,
    lengths: header.lengths,
    time: header.time,
  };
}

/** max |u| computed exactly as the solver does: sqrt(max(re^2 + im^2)). */
export function maxAbs(snap: Snapshot): number {
  let m = 0;
  for (let i = 0; i < snap.re.length; i++) {
    const a2 = snap.re[i] * snap.re[i] + snap.im[i] * snap.im[i];
    if (a2 > m) m = a2;
  }
  return Math.sqrt(m);
}

export function modulus(snap: Snapshot): Float64Array {
  const out = new Float64Array(snap.re.length);
  for (let i = 0; i < out.length; i++) {
    out[i] = Math.sqrt(snap.re[i] * snap.re[i] + snap.im[i] * snap.im[i]);
  }
  return out;
}

export interface Csv {
  columns: string[];
  rows: number[][];
}

export function readCsv(path: string): Csv {
  const text = readFileSync(path, "utf8").trim();
  const lines = text.split(/\r?\n/);
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line) =>
    line.split(",").map((v) => (v === "" ? NaN : Number(v))),
  );
  return { columns, rows };
}

export function csvColumn(csv: Csv, name: string): number[] {
  const j = csv.columns.indexOf(name);
  if (j < 0) throw new Error(`column ${name} not in ${csv.columns.join(",")}`);
  return csv.rows.map((r) => r[j]);
}

export interface PredictionDoc {
  t0: number;
  x10: number;
  sigma: number;
  phi: number;
  events: { kind: string; time: number; x: number; slow: number }[];
  profiles: { kind: string; s: number[]; x1: number[]; t1: number[] };
}

export function readJson<T>(path: string): T {
  return JSON.parse(readFileSync(path, "utf8")) as T;
}
