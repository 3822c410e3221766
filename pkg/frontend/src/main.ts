/**
 * CLI entry: node dist/main.js job.json [job2.json ...]
 *
 * Each job file holds one PlotJob; the renderer writes the PNG to
 * job.output and a sidecar JSON (same path + .json) with the numeric
 * facts computed from the raw inputs.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { encodePng } from "./png.js";
import { PlotJob, render } from "./plots.js";

export function runJob(path: string): Record<string, unknown> {
  const job = JSON.parse(readFileSync(path, "utf8")) as PlotJob;
  if (!job.output) throw new Error(`${path}: job is missing "output"`);
  const { canvas, sidecar } = render(job);
  mkdirSync(dirname(job.output), { recursive: true });
  writeFileSync(job.output, encodePng(canvas.width, canvas.height, canvas.data));
  writeFileSync(job.output + ".json", JSON.stringify(sidecar, null, 1));
  return sidecar;
}

import { pathToFileURL } from "node:url";

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  const args = process.argv.slice(2);
  if (args.length === 0) {
    console.error("usage: node dist/main.js <job.json> [more jobs...]");
    process.exit(1);
  }
  let failed = false;
  for (const path of args) {
    try {
      const sidecar = runJob(path);
      console.log(`${path}: ok (${JSON.stringify(sidecar).slice(0, 120)}...)`);
    } catch (err) {
      failed = true;
      console.error(`${path}: ${(err as Error).message}`);
    }
  }
  process.exit(failed ? 2 : 0);
}
