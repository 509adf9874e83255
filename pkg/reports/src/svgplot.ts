/**
 * Minimal deterministic SVG plot builder: fixed canvas, fixed-precision
 * coordinates, no timestamps, no randomness, explicit font family.  The
 * output string is a pure function of the inputs, which is what makes the
 * rendered figures byte-stable across reruns.
 */

export interface Series {
  label: string;
  points: [number, number][];
  color: string;
  dashed?: boolean;
  markers?: boolean;
}

export interface PlotSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xLog: boolean;
  yLog: boolean;
  series: Series[];
  annotations: string[];
  width?: number;
  height?: number;
}

const MARGIN = { top: 46, right: 24, bottom: 52, left: 78 };
const FONT = 'DejaVu Sans';

const fmt = (x: number): string => x.toFixed(2);

function niceTicksLinear(lo: number, hi: number): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
  const mult = span / step > 16 ? 5 : span / step > 8 ? 2 : 1;
  const s = step * mult;
  const first = Math.ceil(lo / s) * s;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += s) ticks.push(v);
  return ticks;
}

function ticksLog(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

function tickText(v: number, log: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(v));
    return `1e${e}`;
  }
  return Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4 ? v.toExponential(1) : String(Number(v.toPrecision(4)));
}

export function renderSvg(spec: PlotSpec): string {
  const width = spec.width ?? 720;
  const height = spec.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = spec.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = spec.series.flatMap((s) => s.points.map((p) => p[1]));
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${fmt(width / 2)}" y="24" font-family="${FONT}" font-size="16" text-anchor="middle">${escapeXml(spec.title)}</text>`,
  );

  if (xs.length === 0) {
    parts.push(
      `<text x="${fmt(width / 2)}" y="${fmt(height / 2)}" font-family="${FONT}" font-size="18" text-anchor="middle" fill="#888">no data</text>`,
      '</svg>',
    );
    return parts.join('\n') + '\n';
  }

  const tx = (v: number) => (spec.xLog ? Math.log10(v) : v);
  const ty = (v: number) => (spec.yLog ? Math.log10(v) : v);
  let xLo = Math.min(...xs.map(tx));
  let xHi = Math.max(...xs.map(tx));
  let yLo = Math.min(...ys.map(ty));
  let yHi = Math.max(...ys.map(ty));
  if (xHi - xLo < 1e-12) { xLo -= 0.5; xHi += 0.5; }
  if (yHi - yLo < 1e-12) { yLo -= 0.5; yHi += 0.5; }
  const xPad = 0.05 * (xHi - xLo);
  const yPad = 0.07 * (yHi - yLo);
  xLo -= xPad; xHi += xPad; yLo -= yPad; yHi += yPad;

  const X = (v: number) => MARGIN.left + ((tx(v) - xLo) / (xHi - xLo)) * plotW;
  const Y = (v: number) => MARGIN.top + plotH - ((ty(v) - yLo) / (yHi - yLo)) * plotH;

  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333" stroke-width="1"/>`,
  );

  const xTicks = spec.xLog
    ? ticksLog(Math.pow(10, xLo), Math.pow(10, xHi))
    : niceTicksLinear(xLo, xHi);
  for (const v of xTicks) {
    const px = X(v);
    if (px < MARGIN.left - 0.5 || px > MARGIN.left + plotW + 0.5) continue;
    parts.push(
      `<line x1="${fmt(px)}" y1="${MARGIN.top}" x2="${fmt(px)}" y2="${MARGIN.top + plotH}" stroke="#ddd" stroke-width="0.7"/>`,
      `<text x="${fmt(px)}" y="${MARGIN.top + plotH + 18}" font-family="${FONT}" font-size="11" text-anchor="middle">${tickText(v, spec.xLog)}</text>`,
    );
  }
  const yTicks = spec.yLog
    ? ticksLog(Math.pow(10, yLo), Math.pow(10, yHi))
    : niceTicksLinear(yLo, yHi);
  for (const v of yTicks) {
    const py = Y(v);
    if (py < MARGIN.top - 0.5 || py > MARGIN.top + plotH + 0.5) continue;
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(py)}" x2="${MARGIN.left + plotW}" y2="${fmt(py)}" stroke="#ddd" stroke-width="0.7"/>`,
      `<text x="${MARGIN.left - 8}" y="${fmt(py + 4)}" font-family="${FONT}" font-size="11" text-anchor="end">${tickText(v, spec.yLog)}</text>`,
    );
  }

  parts.push(
    `<text x="${fmt(MARGIN.left + plotW / 2)}" y="${height - 12}" font-family="${FONT}" font-size="13" text-anchor="middle">${escapeXml(spec.xLabel)}</text>`,
    `<text x="20" y="${fmt(MARGIN.top + plotH / 2)}" font-family="${FONT}" font-size="13" text-anchor="middle" transform="rotate(-90 20 ${fmt(MARGIN.top + plotH / 2)})">${escapeXml(spec.yLabel)}</text>`,
  );

  for (const series of spec.series) {
    const path = series.points
      .map((p, i) => `${i === 0 ? 'M' : 'L'}${fmt(X(p[0]))},${fmt(Y(p[1]))}`)
      .join(' ');
    const dash = series.dashed ? ' stroke-dasharray="6,4"' : '';
    if (series.points.length > 1) {
      parts.push(
        `<path d="${path}" fill="none" stroke="${series.color}" stroke-width="1.6"${dash}/>`,
      );
    }
    if (series.markers) {
      for (const p of series.points) {
        parts.push(
          `<circle cx="${fmt(X(p[0]))}" cy="${fmt(Y(p[1]))}" r="3.4" fill="${series.color}"/>`,
        );
      }
    }
  }

  // legend
  let ly = MARGIN.top + 14;
  for (const series of spec.series) {
    const lx = MARGIN.left + 12;
    parts.push(
      `<line x1="${lx}" y1="${fmt(ly - 4)}" x2="${lx + 22}" y2="${fmt(ly - 4)}" stroke="${series.color}" stroke-width="2"${series.dashed ? ' stroke-dasharray="6,4"' : ''}/>`,
      `<text x="${lx + 28}" y="${fmt(ly)}" font-family="${FONT}" font-size="12">${escapeXml(series.label)}</text>`,
    );
    ly += 17;
  }

  // annotations, bottom-left inside the frame
  let ay = MARGIN.top + plotH - 10 - 15 * (spec.annotations.length - 1);
  for (const note of spec.annotations) {
    parts.push(
      `<text x="${MARGIN.left + 12}" y="${fmt(ay)}" font-family="${FONT}" font-size="12" fill="#222">${escapeXml(note)}</text>`,
    );
    ay += 15;
  }

  parts.push('</svg>');
  return parts.join('\n') + '\n';
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
