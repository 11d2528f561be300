import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const HEADER =
  "t,mass,momentum,l2_norm,kinetic_energy,electric_energy,total_energy,mass_lost";

/** Synthetic but format-exact diagnostics CSV for one run. */
export function makeDiagnosticsCsv(
  steps: number,
  opts: { momentum?: number; eeScale?: number; phase?: number } = {},
): string {
  const momentum = opts.momentum ?? 1.25e-14;
  const eeScale = opts.eeScale ?? 1.0;
  const phase = opts.phase ?? 0.0;
  const lines = [HEADER];
  for (let n = 0; n <= steps; n++) {
    const t = 0.1 * n;
    // growth then saturation with a ripple, always positive
    const ee = eeScale * (1e-4 + Math.exp(Math.min(0.8 * t, 4)) * 1e-3
      * (1 + 0.3 * Math.sin(2 * t + phase)));
    const ke = 47.0 - ee;
    const l2 = 2.58 * Math.exp(-0.002 * t);
    lines.push([
      t.toPrecision(17),
      (31.415926535897931).toPrecision(17),
      momentum.toPrecision(17),
      l2.toPrecision(17),
      ke.toPrecision(17),
      ee.toPrecision(17),
      (ke + ee).toPrecision(17),
      "0",
    ].join(","));
  }
  return lines.join("\n") + "\n";
}

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "vfsl-plot-"));
}

export function writeRuns(dir: string, labels: string[]): { path: string; label: string }[] {
  return labels.map((label, i) => {
    const path = join(dir, `${label}.csv`);
    writeFileSync(path, makeDiagnosticsCsv(100, { phase: i * 0.7, momentum: 1e-14 * (i + 1) }));
    return { path, label };
  });
}
