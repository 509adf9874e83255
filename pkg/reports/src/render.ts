/**
 * Figure assembly.  Slopes are read from report.json, never refit: the
 * harness is the single source of truth for every number that appears in
 * an annotation.
 */

import { mkdirSync, writeFileSync } from 'fs';
import { join } from 'path';
import { Resvg } from '@resvg/resvg-js';

import { loadConservation, loadDistances, loadReport } from './schema.js';
import { renderSvg, PlotSpec, Series } from './svgplot.js';

export type Format = 'svg' | 'png';

const METRICS: { key: 'trace_over_N' | 'hs_over_sqrtN' | 'l2'; fit: string; label: string }[] = [
  { key: 'trace_over_N', fit: 'trace', label: 'trace distance / N' },
  { key: 'hs_over_sqrtN', fit: 'hs', label: 'HS distance / sqrt(N)' },
  { key: 'l2', fit: 'l2', label: 'L2 distance' },
];

const COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];

function writeFigure(outDir: string, name: string, svg: string, formats: Format[]): string[] {
  mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  if (formats.includes('svg')) {
    const path = join(outDir, `${name}.svg`);
    writeFileSync(path, svg);
    written.push(path);
  }
  if (formats.includes('png')) {
    const png = new Resvg(svg, { font: { loadSystemFonts: true } }).render().asPng();
    const path = join(outDir, `${name}.png`);
    writeFileSync(path, png);
    written.push(path);
  }
  return written;
}

export function slopeAnnotation(slope: number | null, r2: number | null): string {
  if (slope === null) return 'fitted slope: n/a';
  return `fitted slope ${slope.toFixed(4)} (r2 ${r2 === null ? 'n/a' : r2.toFixed(4)})`;
}

/** Log-log distance-versus-epsilon figures, one per metric. */
export function renderConvergenceFigure(
  reportDir: string,
  outDir?: string,
  formats: Format[] = ['svg', 'png'],
): string[] {
  const report = loadReport(reportDir);
  const rows = loadDistances(reportDir);
  const out = outDir ?? reportDir;
  const tEnd = rows.length ? Math.max(...rows.map((r) => r.t)) : 0;
  const written: string[] = [];

  for (const metric of METRICS) {
    const fit = report.fits[metric.fit];
    const pts: [number, number][] = rows
      .filter((r) => Math.abs(r.t - tEnd) < 1e-9 && r[metric.key] > 0)
      .map((r) => [r.eps, r[metric.key]]);
    pts.sort((a, b) => a[0] - b[0]);
    const series: Series[] = [];
    if (pts.length) {
      series.push({ label: `${metric.label} at t=${tEnd}`, points: pts, color: COLORS[0], markers: true });
      if (fit && fit.slope !== null && fit.intercept !== null) {
        const line: [number, number][] = pts.map(([e]) => [
          e,
          Math.exp(fit.intercept as number) * Math.pow(e, fit.slope as number),
        ]);
        series.push({ label: 'fitted power law', points: line, color: COLORS[1], dashed: true });
      }
    }
    const context = report.context['paper_3d_trace_prefactor_exponent'];
    const spec: PlotSpec = {
      title: `Mean-field vs transport gap: ${metric.label}`,
      xLabel: 'epsilon = 1/N',
      yLabel: metric.label,
      xLog: true,
      yLog: true,
      series,
      annotations: [
        slopeAnnotation(fit ? fit.slope : null, fit ? fit.r2 : null),
        `3D reference prefactor exponent ${context} (context only)`,
      ],
    };
    written.push(...writeFigure(out, `convergence_${metric.fit}`, renderSvg(spec), formats));
  }
  return written;
}

/** Conservation-drift figure: energy drifts of both dynamics per rung. */
export function renderConservationFigure(
  reportDir: string,
  outDir?: string,
  formats: Format[] = ['svg', 'png'],
): string[] {
  const rows = loadConservation(reportDir);
  const out = outDir ?? reportDir;
  const byN = new Map<number, typeof rows>();
  for (const row of rows) {
    if (!byN.has(row.N)) byN.set(row.N, []);
    byN.get(row.N)!.push(row);
  }
  const series: Series[] = [];
  let colorIndex = 0;
  const floor = 1e-16;
  for (const [N, group] of [...byN.entries()].sort((a, b) => a[0] - b[0])) {
    group.sort((a, b) => a.t - b.t);
    const h0 = group[0].hartree_energy;
    const v0 = group[0].vlasov_energy;
    const color = COLORS[colorIndex % COLORS.length];
    colorIndex += 1;
    series.push({
      label: `N=${N} mean-field energy drift`,
      points: group.filter((r) => r.t > 0).map((r) => [r.t, Math.max(Math.abs(r.hartree_energy - h0), floor)]),
      color,
      markers: true,
    });
    series.push({
      label: `N=${N} transport energy drift`,
      points: group.filter((r) => r.t > 0).map((r) => [r.t, Math.max(Math.abs(r.vlasov_energy - v0), floor)]),
      color,
      dashed: true,
      markers: true,
    });
  }
  const spec: PlotSpec = {
    title: 'Energy conservation drift |E(t) - E(0)| per rung',
    xLabel: 't',
    yLabel: 'absolute energy drift',
    xLog: false,
    yLog: true,
    series,
    annotations: series.length ? ['budget: 1e-4 per unit time'] : [],
  };
  return writeFigure(out, 'conservation', renderSvg(spec), formats);
}
