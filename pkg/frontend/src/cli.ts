#!/usr/bin/env node
/** plot <kind> --in <csv> --out <file.svg> [--title ...] [--xlabel ...] [--ylabel ...]
 *
 * Exit codes mirror the benchmark CLI: 0 ok, 2 bad arguments, 3 numerical
 * failure, 4 I/O (including schema violations in the input CSV).
 */

import * as fs from 'node:fs';

import { PlotKind, PlotSpec, renderSvg, SchemaError } from './plots.js';

const KINDS: PlotKind[] = ['overlay', 'abs_err', 'percentiles'];

interface Args {
  kind: PlotKind;
  input: string;
  output: string;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

class UsageError extends Error {}

function parseArgs(argv: string[]): Args {
  if (argv.length === 0) {
    throw new UsageError(`usage: plot <${KINDS.join('|')}> --in <csv> --out <file.svg> [--title t] [--xlabel x] [--ylabel y]`);
  }
  const kind = argv[0] as PlotKind;
  if (!KINDS.includes(kind)) {
    throw new UsageError(`unknown kind ${JSON.stringify(argv[0])}; expected one of ${KINDS.join(', ')}`);
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const name = argv[i];
    const value = argv[i + 1];
    if (!name.startsWith('--') || value === undefined) {
      throw new UsageError(`malformed flag near ${JSON.stringify(name)}`);
    }
    flags.set(name.slice(2), value);
  }
  const input = flags.get('in');
  const output = flags.get('out');
  if (!input || !output) {
    throw new UsageError('both --in and --out are required');
  }
  if (!output.endsWith('.svg')) {
    throw new UsageError('only .svg output is supported');
  }
  return {
    kind,
    input,
    output,
    title: flags.get('title'),
    xLabel: flags.get('xlabel'),
    yLabel: flags.get('ylabel'),
  };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`bad arguments: ${(err as Error).message}\n`);
    return 2;
  }
  let text: string;
  try {
    text = fs.readFileSync(args.input, 'utf-8');
  } catch (err) {
    process.stderr.write(`i/o error: ${(err as Error).message}\n`);
    return 4;
  }
  let svg: string;
  try {
    const spec: PlotSpec = {
      inputCsv: args.input,
      kind: args.kind,
      title: args.title,
      xLabel: args.xLabel,
      yLabel: args.yLabel,
    };
    svg = renderSvg(spec, text);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`i/o error: ${err.message}\n`);
      return 4;
    }
    process.stderr.write(`numerical failure: ${(err as Error).message}\n`);
    return 3;
  }
  try {
    fs.writeFileSync(args.output, svg, 'utf-8');
  } catch (err) {
    process.stderr.write(`i/o error: ${(err as Error).message}\n`);
    return 4;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith('cli.js')) {
  process.exit(main(process.argv.slice(2)));
}
