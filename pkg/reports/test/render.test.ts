import { mkdtempSync, readFileSync, writeFileSync, cpSync, rmSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { describe, expect, it } from 'vitest';

import {
  renderConservationFigure,
  renderConvergenceFigure,
  slopeAnnotation,
} from '../src/render.js';
import { SchemaError, loadDistances, loadReport } from '../src/schema.js';

const LADDER = join(__dirname, '..', 'fixtures', 'ladder');
const EMPTY = join(__dirname, '..', 'fixtures', 'empty');

function freshOut(): string {
  return mkdtempSync(join(tmpdir(), 'labreport-'));
}

describe('convergence figure', () => {
  it('produces one png and one svg per metric from the shipped fixture', () => {
    const out = freshOut();
    const written = renderConvergenceFigure(LADDER, out);
    const names = written.map((p) => p.split('/').pop()).sort();
    expect(names).toEqual([
      'convergence_hs.png', 'convergence_hs.svg',
      'convergence_l2.png', 'convergence_l2.svg',
      'convergence_trace.png', 'convergence_trace.svg',
    ].sort());
    for (const p of written) {
      expect(readFileSync(p).length).toBeGreaterThan(100);
    }
  });

  it('annotates the slope read from report.json, not a refit', () => {
    const out = freshOut();
    renderConvergenceFigure(LADDER, out, ['svg']);
    const report = loadReport(LADDER);
    const svg = readFileSync(join(out, 'convergence_trace.svg'), 'utf8');
    const expected = slopeAnnotation(report.fits.trace.slope, report.fits.trace.r2);
    expect(svg).toContain(expected);
    expect(report.fits.trace.slope).not.toBeNull();
    expect(expected).toContain((report.fits.trace.slope as number).toFixed(4));
  });

  it('is byte-stable across reruns', () => {
    const out1 = freshOut();
    const out2 = freshOut();
    renderConvergenceFigure(LADDER, out1);
    renderConvergenceFigure(LADDER, out2);
    for (const name of ['convergence_trace.svg', 'convergence_trace.png',
                        'convergence_hs.svg', 'convergence_l2.png']) {
      const a = readFileSync(join(out1, name));
      const b = readFileSync(join(out2, name));
      expect(a.equals(b)).toBe(true);
    }
  });

  it('renders an explicit placeholder for an empty ladder', () => {
    const out = freshOut();
    const written = renderConvergenceFigure(EMPTY, out);
    expect(written.length).toBe(6);
    const svg = readFileSync(join(out, 'convergence_trace.svg'), 'utf8');
    expect(svg).toContain('no data');
  });
});

describe('conservation figure', () => {
  it('produces png and svg from the fixture', () => {
    const out = freshOut();
    const written = renderConservationFigure(LADDER, out);
    const names = written.map((p) => p.split('/').pop()).sort();
    expect(names).toEqual(['conservation.png', 'conservation.svg']);
  });

  it('is byte-stable across reruns', () => {
    const out1 = freshOut();
    const out2 = freshOut();
    renderConservationFigure(LADDER, out1);
    renderConservationFigure(LADDER, out2);
    const a = readFileSync(join(out1, 'conservation.png'));
    const b = readFileSync(join(out2, 'conservation.png'));
    expect(a.equals(b)).toBe(true);
  });

  it('renders a placeholder for empty input', () => {
    const out = freshOut();
    renderConservationFigure(EMPTY, out);
    const svg = readFileSync(join(out, 'conservation.svg'), 'utf8');
    expect(svg).toContain('no data');
  });
});

describe('schema validation', () => {
  it('names the missing column', () => {
    const dir = freshOut();
    cpSync(LADDER, dir, { recursive: true });
    const path = join(dir, 'distances.csv');
    const lines = readFileSync(path, 'utf8').split('\n');
    lines[0] = 'N,eps,t,trace_over_N,hs_over_sqrtN';  // drop l2
    writeFileSync(path, lines.join('\n'));
    expect(() => loadDistances(dir)).toThrowError(/missing column 'l2'/);
    expect(() => renderConvergenceFigure(dir, freshOut())).toThrowError(SchemaError);
  });

  it('rejects non-numeric cells with the column name', () => {
    const dir = freshOut();
    cpSync(LADDER, dir, { recursive: true });
    const path = join(dir, 'distances.csv');
    const lines = readFileSync(path, 'utf8').trim().split('\n');
    const cells = lines[1].split(',');
    cells[3] = 'bogus';
    lines[1] = cells.join(',');
    writeFileSync(path, lines.join('\n'));
    expect(() => loadDistances(dir)).toThrowError(/column 'trace_over_N'/);
  });

  it('reports missing report.json', () => {
    const dir = freshOut();
    expect(() => renderConvergenceFigure(dir, freshOut())).toThrowError(/missing file/);
  });
});
