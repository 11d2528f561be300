/**
 * Parser for the solver's diagnostics CSV format.
 *
 * Expected header (exact column names, any order is tolerated but the
 * canonical writer emits this order):
 *
 *   t,mass,momentum,l2_norm,kinetic_energy,electric_energy,total_energy,mass_lost
 */

export const DIAGNOSTIC_COLUMNS = [
  "t",
  "mass",
  "momentum",
  "l2_norm",
  "kinetic_energy",
  "electric_energy",
  "total_energy",
  "mass_lost",
] as const;

export type DiagnosticColumn = (typeof DIAGNOSTIC_COLUMNS)[number];

export interface DiagnosticsTable {
  /** column name -> values, all of equal length */
  columns: Map<DiagnosticColumn, number[]>;
  rowCount: number;
  source: string;
}

export class CsvFormatError extends Error {}

export function parseDiagnosticsCsv(text: string, source = "<csv>"): DiagnosticsTable {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvFormatError(`${source}: empty CSV`);
  }
  const header = (lines[0] ?? "").split(",").map((tok) => tok.trim());
  const indexOf = new Map<string, number>();
  header.forEach((name, i) => indexOf.set(name, i));
  for (const required of DIAGNOSTIC_COLUMNS) {
    if (!indexOf.has(required)) {
      throw new CsvFormatError(`${source}: missing column '${required}'`);
    }
  }
  if (lines.length === 1) {
    throw new CsvFormatError(`${source}: no data rows`);
  }

  const columns = new Map<DiagnosticColumn, number[]>(
    DIAGNOSTIC_COLUMNS.map((name) => [name, []]),
  );
  for (let r = 1; r < lines.length; r++) {
    const tokens = (lines[r] ?? "").split(",");
    if (tokens.length < header.length) {
      throw new CsvFormatError(`${source}: row ${r} has ${tokens.length} fields, expected ${header.length}`);
    }
    for (const name of DIAGNOSTIC_COLUMNS) {
      const tok = tokens[indexOf.get(name)!]!;
      const value = Number(tok);
      if (!Number.isFinite(value) && tok.trim() !== "inf" && tok.trim() !== "-inf") {
        if (Number.isNaN(value)) {
          throw new CsvFormatError(`${source}: row ${r}, column '${name}': not a number: '${tok}'`);
        }
      }
      columns.get(name)!.push(value);
    }
  }
  return { columns, rowCount: lines.length - 1, source };
}
