/** Plot specification: which CSVs, which panels, where to write. */

import { readFileSync } from "node:fs";

import type { DiagnosticColumn } from "./csv.js";

export const PANEL_NAMES = ["l2", "momentum", "total_energy", "electric_energy"] as const;
export type PanelName = (typeof PANEL_NAMES)[number];

export interface PanelDef {
  column: DiagnosticColumn;
  title: string;
  logDefault: boolean;
}

export const PANELS: Record<PanelName, PanelDef> = {
  l2: { column: "l2_norm", title: "L2 norm", logDefault: false },
  momentum: { column: "momentum", title: "total momentum", logDefault: false },
  total_energy: { column: "total_energy", title: "total energy", logDefault: false },
  electric_energy: { column: "electric_energy", title: "electric energy", logDefault: true },
};

export interface PlotInput {
  path: string;
  label: string;
}

export interface PlotSpec {
  inputs: PlotInput[];
  panels: PanelName[];
  /** directory for one-file-per-panel output */
  outDir: string;
  /** when set, write all panels stacked into this single SVG instead */
  combined?: string;
  /** per-panel log-scale override; unset panels use their default */
  logScale: Partial<Record<PanelName, boolean>>;
  width: number;
  panelHeight: number;
}

export class PlotSpecError extends Error {}

const DEFAULTS = { outDir: ".", width: 720, panelHeight: 300 };

export function validatePlotSpec(raw: Partial<PlotSpec>): PlotSpec {
  const inputs = raw.inputs ?? [];
  if (inputs.length === 0) {
    throw new PlotSpecError("at least one input CSV is required");
  }
  for (const input of inputs) {
    if (!input.path) throw new PlotSpecError("input without a path");
    if (!input.label) throw new PlotSpecError(`input ${input.path}: empty label`);
  }
  const panels = raw.panels ?? [];
  if (panels.length === 0) {
    throw new PlotSpecError("at least one panel is required");
  }
  for (const p of panels) {
    if (!(PANEL_NAMES as readonly string[]).includes(p)) {
      throw new PlotSpecError(
        `unknown panel '${p}' (choose from ${PANEL_NAMES.join(", ")})`,
      );
    }
  }
  return {
    inputs,
    panels,
    outDir: raw.outDir ?? DEFAULTS.outDir,
    combined: raw.combined,
    logScale: raw.logScale ?? {},
    width: raw.width ?? DEFAULTS.width,
    panelHeight: raw.panelHeight ?? DEFAULTS.panelHeight,
  };
}

/** Load a spec from a JSON file (same fields as the CLI flags). */
export function loadSpecFile(path: string): PlotSpec {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new PlotSpecError(`cannot read spec ${path}: ${(err as Error).message}`);
  }
  return validatePlotSpec(parsed as Partial<PlotSpec>);
}
