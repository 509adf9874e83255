#!/usr/bin/env node
/**
 * lab-report render --dir out/ [--out figures/] [--format png,svg]
 *
 * Reads report.json + distances.csv + conservation.csv from --dir and
 * writes the convergence and conservation figures.
 */

import { renderConservationFigure, renderConvergenceFigure, Format } from './render.js';
import { SchemaError } from './schema.js';

function parseArgs(argv: string[]): { dir: string; out?: string; formats: Format[] } {
  if (argv[0] !== 'render') {
    throw new Error(`unknown command '${argv[0] ?? ''}'; expected: render --dir DIR`);
  }
  let dir: string | undefined;
  let out: string | undefined;
  let formats: Format[] = ['png', 'svg'];
  for (let i = 1; i < argv.length; i++) {
    switch (argv[i]) {
      case '--dir':
        dir = argv[++i];
        break;
      case '--out':
        out = argv[++i];
        break;
      case '--format':
        formats = argv[++i].split(',').map((f) => {
          if (f !== 'png' && f !== 'svg') throw new Error(`unknown format '${f}'`);
          return f as Format;
        });
        break;
      default:
        throw new Error(`unknown argument '${argv[i]}'`);
    }
  }
  if (!dir) throw new Error('missing required --dir');
  return { dir, out, formats };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const written = [
      ...renderConvergenceFigure(args.dir, args.out, args.formats),
      ...renderConservationFigure(args.dir, args.out, args.formats),
    ];
    for (const path of written) console.log(path);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

import { pathToFileURL } from 'url';

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
