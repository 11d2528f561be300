#!/usr/bin/env node
/**
 * vlasov-fsl-plot: render comparison panels from diagnostics CSV files.
 *
 * Usage:
 *   vlasov-fsl-plot --spec spec.json
 *   vlasov-fsl-plot --input out/verlet/diagnostics.csv:verlet \
 *       --input out/ck2/diagnostics.csv:ck2 --input out/ck3/diagnostics.csv:ck3 \
 *       --panels l2,momentum,total_energy --combined panels.svg
 *
 * Flags mirror the JSON spec: --input path:label (repeatable),
 * --panels a,b,c, --out-dir DIR (one SVG per panel), --combined FILE
 * (single stacked SVG), --log PANEL / --no-log PANEL, --width, --panel-height.
 */

import { CsvFormatError } from "./csv.js";
import {
  loadSpecFile,
  PlotSpecError,
  validatePlotSpec,
  type PanelName,
  type PlotInput,
  type PlotSpec,
} from "./plotspec.js";
import { render } from "./render.js";

function parseArgs(argv: string[]): PlotSpec {
  let specFile: string | undefined;
  const inputs: PlotInput[] = [];
  const raw: Partial<PlotSpec> = { logScale: {} };
  const panels: PanelName[] = [];

  const next = (i: number, flag: string): string => {
    const v = argv[i + 1];
    if (v === undefined) throw new PlotSpecError(`${flag} needs a value`);
    return v;
  };

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    switch (arg) {
      case "--spec":
        specFile = next(i, arg); i++;
        break;
      case "--input": {
        const val = next(i, arg); i++;
        const sep = val.lastIndexOf(":");
        if (sep <= 0 || sep === val.length - 1) {
          throw new PlotSpecError(`--input expects path:label, got '${val}'`);
        }
        inputs.push({ path: val.slice(0, sep), label: val.slice(sep + 1) });
        break;
      }
      case "--panels":
        panels.push(...(next(i, arg).split(",").filter(Boolean) as PanelName[])); i++;
        break;
      case "--out-dir":
        raw.outDir = next(i, arg); i++;
        break;
      case "--combined":
        raw.combined = next(i, arg); i++;
        break;
      case "--log":
        raw.logScale![next(i, arg) as PanelName] = true; i++;
        break;
      case "--no-log":
        raw.logScale![next(i, arg) as PanelName] = false; i++;
        break;
      case "--width":
        raw.width = Number(next(i, arg)); i++;
        break;
      case "--panel-height":
        raw.panelHeight = Number(next(i, arg)); i++;
        break;
      default:
        throw new PlotSpecError(`unknown flag '${arg}'`);
    }
  }

  if (specFile !== undefined) {
    const spec = loadSpecFile(specFile);
    // flags layered on top of the file
    return validatePlotSpec({
      ...spec,
      inputs: inputs.length ? inputs : spec.inputs,
      panels: panels.length ? panels : spec.panels,
      outDir: raw.outDir ?? spec.outDir,
      combined: raw.combined ?? spec.combined,
      logScale: { ...spec.logScale, ...raw.logScale },
      width: raw.width ?? spec.width,
      panelHeight: raw.panelHeight ?? spec.panelHeight,
    });
  }
  return validatePlotSpec({ ...raw, inputs, panels });
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const { written } = render(spec);
    for (const path of written) {
      console.log(`wrote ${path}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof PlotSpecError || err instanceof CsvFormatError) {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    if ((err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
}

const isDirectRun =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
