/** Axis scales and tick generation (linear and log10). */

export interface Scale {
  /** data value -> pixel coordinate */
  map(value: number): number;
  ticks(): number[];
  /** true when the value can be displayed on this scale */
  displayable(value: number): boolean;
}

function niceStep(span: number, target: number): number {
  const raw = span / Math.max(target, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(
  min: number,
  max: number,
  pxFrom: number,
  pxTo: number,
  tickTarget = 5,
): Scale {
  if (!(max > min)) {
    // degenerate range: pad around the value
    const pad = Math.abs(min) > 0 ? Math.abs(min) * 0.1 : 1;
    min -= pad;
    max += pad;
  }
  const k = (pxTo - pxFrom) / (max - min);
  return {
    map: (v) => pxFrom + (v - min) * k,
    displayable: () => true,
    ticks: () => {
      const step = niceStep(max - min, tickTarget);
      const first = Math.ceil(min / step) * step;
      const out: number[] = [];
      for (let v = first; v <= max + 1e-12 * Math.abs(step); v += step) {
        out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
      }
      return out;
    },
  };
}

export function logScale(
  min: number,
  max: number,
  pxFrom: number,
  pxTo: number,
): Scale {
  if (!(min > 0)) {
    throw new Error(`log scale needs positive minimum, got ${min}`);
  }
  if (!(max > min)) {
    max = min * 10;
  }
  const lmin = Math.log10(min);
  const lmax = Math.log10(max);
  const k = (pxTo - pxFrom) / (lmax - lmin);
  return {
    map: (v) => pxFrom + (Math.log10(v) - lmin) * k,
    displayable: (v) => v > 0,
    ticks: () => {
      const out: number[] = [];
      for (let e = Math.ceil(lmin - 1e-9); e <= Math.floor(lmax + 1e-9); e++) {
        out.push(Number(`1e${e}`));  // exact decade literals, not pow()
      }
      // spans with few decade marks get the range endpoints as well
      if (out.length < 2) {
        out.push(min, max);
        out.sort((a, b) => a - b);
      }
      return out;
    },
  };
}

/** Deterministic short number formatting for tick labels. */
export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-2) {
    return v.toExponential(0).replace("e+", "e");
  }
  const s = v.toPrecision(4);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}
