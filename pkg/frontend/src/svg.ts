/** Deterministic SVG assembly: no timestamps, no randomness, fixed number
 * formatting, so equal inputs give byte-identical output. */

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_FRAME: Frame = {
  width: 800,
  height: 500,
  margin: { top: 44, right: 24, bottom: 48, left: 64 },
};

export interface Series {
  label: string;
  color: string;
  xs: number[];
  ys: number[];
}

/** Shortest round-trip decimal of an 8-significant-digit value. */
export function fmt(value: number): string {
  if (!Number.isFinite(value)) throw new Error(`cannot format ${value}`);
  if (value === 0) return '0';
  return String(Number(value.toPrecision(8)));
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
}

export interface Scale {
  (value: number): number;
  ticks: number[];
  tickLabel: (tick: number) => string;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (hi === lo) {
    hi = lo + 1;
    lo = lo - 1;
  }
  const span = hi - lo;
  const step = niceStep(span / 6);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
    ticks.push(Math.abs(t) < 1e-12 * span ? 0 : t);
  }
  const scale = ((value: number) => outLo + ((value - lo) / span) * (outHi - outLo)) as Scale;
  scale.ticks = ticks;
  scale.tickLabel = fmt;
  return scale;
}

/** Log10 scale over positive data; values at or below `floor` clamp to it. */
export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi - llo || 1;
  const ticks: number[] = [];
  for (let e = Math.ceil(llo); e <= Math.floor(lhi); e += 1) {
    ticks.push(e);
  }
  const scale = ((value: number) => outLo + ((Math.log10(value) - llo) / span) * (outHi - outLo)) as Scale;
  scale.ticks = ticks.map((e) => Math.pow(10, e));
  scale.tickLabel = (tick: number) => `1e${Math.round(Math.log10(tick))}`;
  return scale;
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const unit = raw / mag;
  const nice = unit < 1.5 ? 1 : unit < 3.5 ? 2 : unit < 7.5 ? 5 : 10;
  return nice * mag;
}

function polyline(series: Series, sx: Scale, sy: Scale): string {
  const pts = series.xs
    .map((x, i) => `${fmt(sx(x))},${fmt(sy(series.ys[i]))}`)
    .join(' ');
  return `  <polyline fill="none" stroke="${series.color}" stroke-width="1.5" points="${pts}"/>`;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY?: boolean;
  frame?: Frame;
}

export function renderChart(seriesList: Series[], opts: ChartOptions): string {
  const frame = opts.frame ?? DEFAULT_FRAME;
  const { width, height, margin } = frame;
  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = height - margin.bottom;
  const y1 = margin.top;

  const allX = seriesList.flatMap((s) => s.xs);
  const allY = seriesList.flatMap((s) => s.ys);
  const sx = linearScale(Math.min(...allX), Math.max(...allX), x0, x1);
  let sy: Scale;
  if (opts.logY) {
    const positives = allY.filter((v) => v > 0);
    const hi = positives.length ? Math.max(...positives) : 1;
    const lo = positives.length ? Math.min(...positives) : 1e-16;
    sy = logScale(lo, hi, y0, y1);
  } else {
    sy = linearScale(Math.min(...allY), Math.max(...allY), y0, y1);
  }

  const parts: string[] = [];
  parts.push('<?xml version="1.0" encoding="UTF-8"?>');
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
  );
  parts.push(`  <rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`);
  parts.push(`  <text x="${fmt(width / 2)}" y="24" font-size="16" text-anchor="middle">${escapeXml(opts.title)}</text>`);

  for (const tick of sx.ticks) {
    const px = fmt(sx(tick));
    parts.push(`  <line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#dddddd"/>`);
    parts.push(`  <text x="${px}" y="${y0 + 18}" font-size="11" text-anchor="middle">${sx.tickLabel(tick)}</text>`);
  }
  for (const tick of sy.ticks) {
    const py = fmt(sy(tick));
    parts.push(`  <line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#dddddd"/>`);
    parts.push(`  <text x="${x0 - 6}" y="${py}" font-size="11" text-anchor="end" dominant-baseline="middle">${sy.tickLabel(tick)}</text>`);
  }
  parts.push(`  <line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  parts.push(`  <line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  parts.push(`  <text x="${fmt((x0 + x1) / 2)}" y="${height - 10}" font-size="12" text-anchor="middle">${escapeXml(opts.xLabel)}</text>`);
  parts.push(
    `  <text x="16" y="${fmt((y0 + y1) / 2)}" font-size="12" text-anchor="middle" transform="rotate(-90 16 ${fmt((y0 + y1) / 2)})">${escapeXml(opts.yLabel)}</text>`,
  );

  const clampFloor = opts.logY ? Math.min(...sy.ticks) : undefined;
  for (const series of seriesList) {
    const drawn = clampFloor === undefined
      ? series
      : { ...series, ys: series.ys.map((v) => (v > 0 ? v : clampFloor)) };
    parts.push(polyline(drawn, sx, sy));
  }

  seriesList.forEach((series, i) => {
    const ly = y1 + 14 + 18 * i;
    parts.push(`  <rect class="legend-swatch" x="${x1 - 150}" y="${ly - 9}" width="18" height="4" fill="${series.color}"/>`);
    parts.push(`  <text class="legend-label" x="${x1 - 126}" y="${ly}" font-size="12">${escapeXml(series.label)}</text>`);
  });

  parts.push('</svg>');
  return parts.join('\n') + '\n';
}
