/**
 * Loaders for the lab output directory.  Only the documented schemas are
 * consumed (report.json plus distances.csv / conservation.csv); anything
 * missing or malformed raises a SchemaError naming the offending file or
 * column.  No physics is recomputed here.
 */

import { readFileSync, existsSync } from 'fs';
import { join } from 'path';

export class SchemaError extends Error {}

export interface FitEntry {
  slope: number | null;
  intercept: number | null;
  r2: number | null;
  points: [number, number][];
  strictly_decreasing_along_ladder: boolean;
}

export interface LabReport {
  config: Record<string, unknown>;
  rungs: unknown[];
  fits: Record<string, FitEntry>;
  context: Record<string, unknown>;
}

export interface DistanceRow {
  N: number;
  eps: number;
  t: number;
  trace_over_N: number;
  hs_over_sqrtN: number;
  l2: number;
}

export interface ConservationRow {
  N: number;
  eps: number;
  t: number;
  hartree_trace: number;
  hartree_purity: number;
  hartree_energy: number;
  vlasov_mass: number;
  vlasov_energy: number;
}

const DISTANCE_COLUMNS = ['N', 'eps', 't', 'trace_over_N', 'hs_over_sqrtN', 'l2'];
const CONSERVATION_COLUMNS = [
  'N', 'eps', 't', 'hartree_trace', 'hartree_purity', 'hartree_energy',
  'hartree_occ_min', 'hartree_occ_max', 'vlasov_mass', 'vlasov_l2',
  'vlasov_energy', 'max_E',
];

function parseCsv(path: string, required: string[]): Record<string, number>[] {
  if (!existsSync(path)) {
    throw new SchemaError(`missing file: ${path}`);
  }
  const lines = readFileSync(path, 'utf8').trim().split(/\r?\n/);
  if (lines.length === 0 || lines[0] === '') {
    throw new SchemaError(`empty CSV: ${path}`);
  }
  const header = lines[0].split(',');
  for (const column of required) {
    if (!header.includes(column)) {
      throw new SchemaError(`${path}: missing column '${column}'`);
    }
  }
  const rows: Record<string, number>[] = [];
  for (let i = 1; i < lines.length; i++) {
    if (lines[i].trim() === '') continue;
    const cells = lines[i].split(',');
    if (cells.length !== header.length) {
      throw new SchemaError(`${path}: row ${i + 1} has ${cells.length} cells, expected ${header.length}`);
    }
    const row: Record<string, number> = {};
    header.forEach((name, j) => {
      const value = Number(cells[j]);
      if (Number.isNaN(value)) {
        throw new SchemaError(`${path}: row ${i + 1}, column '${name}' is not numeric: '${cells[j]}'`);
      }
      row[name] = value;
    });
    rows.push(row);
  }
  return rows;
}

export function loadReport(dir: string): LabReport {
  const path = join(dir, 'report.json');
  if (!existsSync(path)) {
    throw new SchemaError(`missing file: ${path}`);
  }
  const raw = JSON.parse(readFileSync(path, 'utf8'));
  for (const key of ['config', 'rungs', 'fits', 'context']) {
    if (!(key in raw)) {
      throw new SchemaError(`report.json: missing key '${key}'`);
    }
  }
  return raw as LabReport;
}

export function loadDistances(dir: string): DistanceRow[] {
  return parseCsv(join(dir, 'distances.csv'), DISTANCE_COLUMNS) as unknown as DistanceRow[];
}

export function loadConservation(dir: string): ConservationRow[] {
  return parseCsv(join(dir, 'conservation.csv'), CONSERVATION_COLUMNS) as unknown as ConservationRow[];
}
