/**
 * The five plot kinds. Every renderer returns the RGBA canvas plus a
 * sidecar of numeric facts computed from the raw input files (never from
 * pixels): max |u|, max distance, classifications, topology.
 */

import {
  csvColumn,
  maxAbs,
  modulus,
  PredictionDoc,
  readCsv,
  readJson,
  readSnapshot,
  Snapshot,
} from "./formats.js";
import { Canvas, Rgb, Scale, viridis } from "./raster.js";
import { levelSetTopology } from "./topology.js";

export interface PlotJob {
  kind: "surface" | "profile" | "distance" | "isosurface" | "scanmap";
  inputs: Record<string, unknown>;
  style?: { width?: number; height?: number; level?: number };
  output: string;
}

export interface Rendered {
  canvas: Canvas;
  sidecar: Record<string, unknown>;
}

const SERIES_COLORS: Rgb[] = [
  [230, 120, 30],
  [40, 90, 200],
  [30, 160, 90],
  [180, 40, 120],
];

function sliceXY(snap: Snapshot): { grid: Float64Array; nx: number; ny: number } {
  const mod = modulus(snap);
  const [nx, ny] = [snap.counts[0], snap.counts[1] ?? 1];
  if (snap.counts.length <= 2) {
    return { grid: mod, nx, ny };
  }
  // 3-d: slab through the z index of the global maximum
  const nz = snap.counts[2];
  let best = 0;
  let bestV = -1;
  for (let i = 0; i < mod.length; i++) {
    if (mod[i] > bestV) {
      bestV = mod[i];
      best = i;
    }
  }
  const izStar = best % nz;
  const out = new Float64Array(nx * ny);
  for (let ix = 0; ix < nx; ix++) {
    for (let iy = 0; iy < ny; iy++) {
      out[iy + ny * ix] = mod[izStar + nz * (iy + ny * ix)];
    }
  }
  return { grid: out, nx, ny };
}

export function renderSurface(job: PlotJob): Rendered {
  const snap = readSnapshot(String(job.inputs.snapshot));
  const { grid, nx, ny } = sliceXY(snap);
  const W = job.style?.width ?? 640;
  const H = job.style?.height ?? 480;
  const canvas = new Canvas(W, H);
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of grid) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  for (let py = 0; py < H; py++) {
    for (let px = 0; px < W; px++) {
      // x along the vertical axis, slow coordinate along the horizontal
      const iy = Math.min(ny - 1, Math.floor((px / W) * ny));
      const ix = Math.min(nx - 1, Math.floor((py / H) * nx));
      canvas.set(px, py, viridis((grid[iy + ny * ix] - lo) / (hi - lo || 1)));
    }
  }
  canvas.frame();
  return {
    canvas,
    sidecar: {
      kind: "surface",
      time: snap.time,
      max_abs_u: maxAbs(snap),
      slice_max: hi,
      counts: snap.counts,
    },
  };
}

export function renderProfile(job: PlotJob): Rendered {
  const doc = readJson<PredictionDoc>(String(job.inputs.prediction));
  const W = job.style?.width ?? 640;
  const H = job.style?.height ?? 480;
  const canvas = new Canvas(W, H);
  const s = doc.profiles.s;
  const t1 = doc.profiles.t1;
  const finite = t1.filter((v) => v < 1e5);
  const tLo = Math.min(...finite);
  const tHi = Math.max(...finite);
  const pad = 0.08 * (tHi - tLo || 1);
  const sx = new Scale(s[0], s[s.length - 1], 10, W - 10);
  const sy = new Scale(tLo - pad, tHi + pad, H - 10, 10);
  // event levels as dashed horizontal lines
  for (const ev of doc.events) {
    const py = Math.round(sy.apply(ev.time));
    for (let px = 10; px < W - 10; px += 8) {
      canvas.line(px, py, Math.min(px + 4, W - 11), py, [150, 150, 150]);
    }
  }
  for (let i = 1; i < s.length; i++) {
    if (t1[i - 1] > 1e5 || t1[i] > 1e5) continue;
    canvas.line(
      sx.apply(s[i - 1]),
      sy.apply(t1[i - 1]),
      sx.apply(s[i]),
      sy.apply(t1[i]),
      [200, 60, 40],
    );
  }
  canvas.frame();
  const fissions = doc.events.filter((e) => e.kind === "fission").map((e) => e.time);
  const fusions = doc.events.filter((e) => e.kind === "fusion").map((e) => e.time);
  return {
    canvas,
    sidecar: {
      kind: "profile",
      t0: doc.t0,
      t1_min: tLo,
      t_fission: fissions.length ? Math.min(...fissions) : null,
      t_fusion: fusions.length ? Math.min(...fusions) : null,
      n_events: doc.events.length,
    },
  };
}

export function renderDistance(job: PlotJob): Rendered {
  const paths = job.inputs.series as string[];
  const W = job.style?.width ?? 640;
  const H = job.style?.height ?? 480;
  const canvas = new Canvas(W, H);
  const series = paths.map((p) => {
    const csv = readCsv(p);
    return { t: csvColumn(csv, "time"), d: csvColumn(csv, "distance") };
  });
  const tLo = Math.min(...series.map((s) => Math.min(...s.t)));
  const tHi = Math.max(...series.map((s) => Math.max(...s.t)));
  const dHi = Math.max(...series.map((s) => Math.max(...s.d)));
  const sx = new Scale(tLo, tHi, 10, W - 10);
  const sy = new Scale(0, dHi * 1.08 || 1, H - 10, 10);
  series.forEach((ser, k) => {
    const color = SERIES_COLORS[k % SERIES_COLORS.length];
    for (let i = 1; i < ser.t.length; i++) {
      canvas.line(
        sx.apply(ser.t[i - 1]),
        sy.apply(ser.d[i - 1]),
        sx.apply(ser.t[i]),
        sy.apply(ser.d[i]),
        color,
      );
    }
  });
  canvas.frame();
  return {
    canvas,
    sidecar: {
      kind: "distance",
      max_distance: series.map((s) => Math.max(...s.d)),
      t_range: [tLo, tHi],
      n_series: series.length,
    },
  };
}

export function renderIsosurface(job: PlotJob): Rendered {
  const snap = readSnapshot(String(job.inputs.snapshot));
  if (snap.counts.length !== 3) throw new Error("isosurface needs a 3-d snapshot");
  const level = job.style?.level ?? Number(job.inputs.level ?? 2.2);
  const mod = modulus(snap);
  const topo = levelSetTopology(mod, snap.counts, level);
  const [nx, ny, nz] = snap.counts;
  const W = job.style?.width ?? 480;
  const H = job.style?.height ?? 480;
  const canvas = new Canvas(W, H, [20, 20, 30]);
  // (y, z) projection: strongest above-level voxel along x, depth-shaded
  const proj = new Float64Array(ny * nz);
  for (let ix = 0; ix < nx; ix++) {
    for (let iy = 0; iy < ny; iy++) {
      for (let iz = 0; iz < nz; iz++) {
        const v = mod[iz + nz * (iy + ny * ix)];
        if (v > level && v > proj[iz + nz * iy]) proj[iz + nz * iy] = v;
      }
    }
  }
  let hi = level;
  for (const v of proj) if (v > hi) hi = v;
  for (let py = 0; py < H; py++) {
    for (let px = 0; px < W; px++) {
      const iy = Math.min(ny - 1, Math.floor((px / W) * ny));
      const iz = Math.min(nz - 1, Math.floor((py / H) * nz));
      const v = proj[iz + nz * iy];
      if (v > 0) {
        canvas.set(px, py, viridis((v - level) / (hi - level || 1)));
      }
    }
  }
  canvas.frame([200, 200, 200]);
  return {
    canvas,
    sidecar: {
      kind: "isosurface",
      time: snap.time,
      level,
      max_abs_u: maxAbs(snap),
      components: topo.components,
      euler_characteristic: topo.euler_characteristic,
      is_ring: topo.is_ring,
      occupied: topo.occupied,
    },
  };
}

interface ScanDoc {
  points: {
    kx: number;
    ky: number;
    s: number;
    classification: string;
    Lx?: number;
    Ly?: number;
  }[];
}

const CLASS_COLORS: Record<string, Rgb> = {
  fission: [200, 40, 40],
  "no-fission": [40, 160, 60],
  "no-growth": [120, 120, 120],
  error: [0, 0, 0],
};

export function renderScanMap(job: PlotJob): Rendered {
  const doc = readJson<ScanDoc>(String(job.inputs.report));
  const W = job.style?.width ?? 480;
  const H = job.style?.height ?? 480;
  const canvas = new Canvas(W, H);
  const kxHi = Math.max(3.5, ...doc.points.map((p) => p.kx)) * 1.1;
  const kyHi = Math.max(3.0, ...doc.points.map((p) => p.ky)) * 1.1;
  const sx = new Scale(0, kxHi, 10, W - 10);
  const sy = new Scale(0, kyHi, H - 10, 10);
  // MI-domain boundaries kx^2 - ky^2 = 0 and = 4
  for (let px = 10; px < W - 10; px++) {
    const kx = (px - 10) / (W - 20) * kxHi;
    const ky0 = kx;
    if (ky0 <= kyHi) canvas.set(px, Math.round(sy.apply(ky0)), [60, 60, 200]);
    const s4 = kx * kx - 4;
    if (s4 >= 0) {
      const ky4 = Math.sqrt(s4);
      if (ky4 <= kyHi) canvas.set(px, Math.round(sy.apply(ky4)), [60, 60, 200]);
    }
  }
  for (const p of doc.points) {
    const c = CLASS_COLORS[p.classification] ?? [0, 0, 0];
    const px = Math.round(sx.apply(p.kx));
    const py = Math.round(sy.apply(p.ky));
    canvas.fillRect(px - 4, py - 4, 9, 9, c);
  }
  canvas.frame();
  return {
    canvas,
    sidecar: {
      kind: "scanmap",
      classifications: doc.points.map((p) => ({
        kx: p.kx,
        ky: p.ky,
        classification: p.classification,
      })),
    },
  };
}

export function render(job: PlotJob): Rendered {
  switch (job.kind) {
    case "surface":
      return renderSurface(job);
    case "profile":
      return renderProfile(job);
    case "distance":
      return renderDistance(job);
    case "isosurface":
      return renderIsosurface(job);
    case "scanmap":
      return renderScanMap(job);
    default:
      throw new Error(`unknown plot kind ${(job as PlotJob).kind}`);
  }
}
