/**
 * End-to-end check against real solver outputs: renders all five plot
 * kinds from compare/scan/predict output directories and verifies that
 * every sidecar numeric matches the solver's own summary values exactly
 * (same raw data, same float64 reductions).
 *
 * usage: node dist/a10.js <fig2-dir> <fig2-enls-dir> <fig4-dir> <fig6-dir>
 * where the fig2/fig4 dirs come from `q1dnls compare` and the fig6 dir
 * from `q1dnls scan`.
 */

import { readdirSync, readFileSync } from "node:fs";
import { join } from "node:path";

import { maxAbs, readCsv, csvColumn, readJson, readSnapshot } from "./formats.js";
import { PlotJob, render } from "./plots.js";
import { encodePng } from "./png.js";
import { writeFileSync, mkdirSync } from "node:fs";

interface Summary {
  max_distance: number;
  isosurface?: {
    time: number;
    components: number;
    euler_characteristic: number;
    is_ring: boolean;
  }[];
}

let failures = 0;

function check(label: string, ok: boolean, detail: string): void {
  console.log(`[A10] ${ok ? "PASS" : "FAIL"} - ${label}: ${detail}`);
  if (!ok) failures++;
}

function snapshots(dir: string): string[] {
  return readdirSync(dir)
    .filter((f) => f.endsWith(".bin"))
    .sort()
    .map((f) => join(dir, f));
}

function writeOut(job: PlotJob): Record<string, unknown> {
  const { canvas, sidecar } = render(job);
  mkdirSync("a10-out", { recursive: true });
  writeFileSync(job.output, encodePng(canvas.width, canvas.height, canvas.data));
  writeFileSync(job.output + ".json", JSON.stringify(sidecar, null, 1));
  return sidecar;
}

const [fig2, fig2enls, fig4, fig6] = process.argv.slice(2);
if (!fig2 || !fig2enls || !fig4 || !fig6) {
  console.error("usage: node dist/a10.js <fig2-dir> <fig2-enls-dir> <fig4-dir> <fig6-dir>");
  process.exit(1);
}

// surface from the fig2 fission-time snapshot
{
  const snap = snapshots(fig2)[0];
  const sidecar = writeOut({
    kind: "surface",
    inputs: { snapshot: snap },
    output: "a10-out/surface.png",
  });
  const fromCsv = readCsv(join(fig2, "snapshots.csv"));
  const expect = csvColumn(fromCsv, "max_abs_u")[0];
  const got = sidecar.max_abs_u as number;
  check("surface max|u|", got === expect, `${got} vs solver ${expect}`);
  const direct = maxAbs(readSnapshot(snap));
  check("surface max|u| recompute", direct === got, `${direct}`);
}

// profile from the fig2 prediction
{
  const sidecar = writeOut({
    kind: "profile",
    inputs: { prediction: join(fig2, "prediction.json") },
    output: "a10-out/profile.png",
  });
  const pred = readJson<{ t0: number }>(join(fig2, "prediction.json"));
  check("profile t0", sidecar.t0 === pred.t0, `${sidecar.t0}`);
}

// distance curves for both transverse signs
{
  const sidecar = writeOut({
    kind: "distance",
    inputs: { series: [join(fig2, "distance.csv"), join(fig2enls, "distance.csv")] },
    output: "a10-out/distance.png",
  });
  const maxes = sidecar.max_distance as number[];
  const s2 = readJson<Summary>(join(fig2, "summary.json"));
  const s2e = readJson<Summary>(join(fig2enls, "summary.json"));
  check(
    "distance maxima",
    maxes[0] === s2.max_distance && maxes[1] === s2e.max_distance,
    `${maxes} vs solver [${s2.max_distance}, ${s2e.max_distance}]`,
  );
}

// isosurface from the last fig4 snapshot (post-fission ring)
{
  const snaps = snapshots(fig4);
  const snap = snaps[snaps.length - 1];
  const sidecar = writeOut({
    kind: "isosurface",
    inputs: { snapshot: snap, level: 2.2 },
    output: "a10-out/isosurface.png",
  });
  const s4 = readJson<Summary>(join(fig4, "summary.json"));
  const solver = s4.isosurface![s4.isosurface!.length - 1];
  const ok =
    sidecar.components === solver.components &&
    sidecar.euler_characteristic === solver.euler_characteristic &&
    sidecar.is_ring === solver.is_ring;
  check(
    "isosurface topology",
    ok,
    `components ${sidecar.components}, chi ${sidecar.euler_characteristic}, ` +
      `ring ${sidecar.is_ring} vs solver ${solver.components}/${solver.euler_characteristic}/${solver.is_ring}`,
  );
}

// scan map
{
  const sidecar = writeOut({
    kind: "scanmap",
    inputs: { report: join(fig6, "scan.json") },
    output: "a10-out/scanmap.png",
  });
  const doc = readJson<{ points: { classification: string }[] }>(join(fig6, "scan.json"));
  const got = (sidecar.classifications as { classification: string }[]).map(
    (c) => c.classification,
  );
  const expect = doc.points.map((p) => p.classification);
  check(
    "scan classifications",
    JSON.stringify(got) === JSON.stringify(expect),
    got.join(","),
  );
}

process.exit(failures ? 1 : 0);
