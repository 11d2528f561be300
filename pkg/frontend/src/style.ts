/** Fixed style table so multi-run comparisons stay visually consistent. */

export interface SeriesStyle {
  color: string;
  width: number;
  dash?: string;
}

export const SERIES_STYLES: SeriesStyle[] = [
  { color: "#1f77b4", width: 1.4 },
  { color: "#d62728", width: 1.4, dash: "6,3" },
  { color: "#2ca02c", width: 1.4, dash: "2,3" },
  { color: "#9467bd", width: 1.4, dash: "8,3,2,3" },
  { color: "#ff7f0e", width: 1.4, dash: "1,2" },
  { color: "#8c564b", width: 1.4, dash: "10,4" },
];

export function seriesStyle(index: number): SeriesStyle {
  return SERIES_STYLES[index % SERIES_STYLES.length]!;
}

export const AXIS_COLOR = "#333333";
export const GRID_COLOR = "#dddddd";
export const FONT = "11px sans-serif";
