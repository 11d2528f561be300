/** Read diagnostics CSVs and write the requested SVG panels. */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { basename, join } from "node:path";

import { parseDiagnosticsCsv, type DiagnosticsTable } from "./csv.js";
import { renderPanelBody, wrapSvg, type PanelSeries } from "./panel.js";
import { PANELS, type PanelName, type PlotSpec } from "./plotspec.js";

export interface RenderResult {
  written: string[];
}

function loadInputs(spec: PlotSpec): { label: string; table: DiagnosticsTable }[] {
  return spec.inputs.map((input) => ({
    label: input.label,
    table: parseDiagnosticsCsv(readFileSync(input.path, "utf-8"), basename(input.path)),
  }));
}

function panelSeries(
  inputs: { label: string; table: DiagnosticsTable }[],
  panel: PanelName,
): PanelSeries[] {
  const column = PANELS[panel].column;
  return inputs.map(({ label, table }) => ({
    label,
    t: table.columns.get("t")!,
    values: table.columns.get(column)!,
  }));
}

function isLog(spec: PlotSpec, panel: PanelName): boolean {
  return spec.logScale[panel] ?? PANELS[panel].logDefault;
}

export function render(spec: PlotSpec): RenderResult {
  const inputs = loadInputs(spec);
  const written: string[] = [];

  if (spec.combined) {
    const height = spec.panelHeight * spec.panels.length;
    const bodies = spec.panels.map((panel, i) =>
      renderPanelBody(
        panelSeries(inputs, panel),
        {
          title: PANELS[panel].title + (isLog(spec, panel) ? " (log)" : ""),
          log: isLog(spec, panel),
          width: spec.width,
          height: spec.panelHeight,
        },
        i * spec.panelHeight,
      ),
    );
    writeFileSync(spec.combined, wrapSvg(bodies.join("\n"), spec.width, height));
    written.push(spec.combined);
    return { written };
  }

  mkdirSync(spec.outDir, { recursive: true });
  for (const panel of spec.panels) {
    const body = renderPanelBody(
      panelSeries(inputs, panel),
      {
        title: PANELS[panel].title + (isLog(spec, panel) ? " (log)" : ""),
        log: isLog(spec, panel),
        width: spec.width,
        height: spec.panelHeight,
      },
      0,
    );
    const path = join(spec.outDir, `${panel}.svg`);
    writeFileSync(path, wrapSvg(body, spec.width, spec.panelHeight));
    written.push(path);
  }
  return { written };
}
