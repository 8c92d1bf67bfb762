import { execFileSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { fileURLToPath } from 'node:url';

import { describe, expect, it } from 'vitest';

import { parseCsv, SchemaError } from '../src/csv.js';
import { renderSvg } from '../src/plots.js';
import { fmt, linearScale, logScale } from '../src/svg.js';

const here = path.dirname(fileURLToPath(import.meta.url));
const fixture = (name: string) => path.join(here, 'fixtures', name);
const read = (name: string) => fs.readFileSync(fixture(name), 'utf-8');

describe('csv parsing', () => {
  it('reads schema-tagged tables', () => {
    const table = parseCsv(read('compare.csv'));
    expect(table.rows).toBe(40);
    expect(table.names).toContain('nyquist_abs_err');
  });

  it('rejects a missing schema line', () => {
    expect(() => parseCsv('x,y\n1,2\n')).toThrow(SchemaError);
  });

  it('rejects a header-only file with row count 0', () => {
    expect(() => parseCsv(read('empty.csv'))).toThrow(/row count 0/);
  });

  it('rejects ragged rows', () => {
    expect(() => parseCsv('# schema=1\nx,y\n1\n')).toThrow(SchemaError);
  });
});

describe('scales and formatting', () => {
  it('formats deterministically', () => {
    expect(fmt(0)).toBe('0');
    expect(fmt(1 / 3)).toBe('0.33333333');
    expect(fmt(12.5)).toBe('12.5');
  });

  it('linear scale covers the range', () => {
    const s = linearScale(0, 10, 0, 100);
    expect(s(0)).toBe(0);
    expect(s(10)).toBe(100);
    expect(s.ticks.length).toBeGreaterThan(3);
  });

  it('log scale ticks are powers of ten', () => {
    const s = logScale(1e-6, 1e-1, 100, 0);
    for (const t of s.ticks) {
      expect(Math.log10(t)).toBeCloseTo(Math.round(Math.log10(t)), 9);
    }
    expect(s.tickLabel(1e-3)).toBe('1e-3');
  });
});

describe('figure rendering', () => {
  it('overlay draws f in black and the derivative in blue', () => {
    const svg = renderSvg({ inputCsv: '', kind: 'overlay' }, read('compare.csv'));
    expect(svg).toContain('stroke="black" stroke-width="1.5"');
    expect(svg).toContain('stroke="blue" stroke-width="1.5"');
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2);
  });

  it('abs_err uses a log axis with both method colors', () => {
    const svg = renderSvg({ inputCsv: '', kind: 'abs_err' }, read('compare.csv'));
    expect(svg).toContain('stroke="red"');
    expect(svg).toContain('stroke="green"');
    expect(svg).toMatch(/>1e-\d+</); // log-axis tick labels
  });

  it('percentiles carries the four pinned legend entries', () => {
    const svg = renderSvg({ inputCsv: '', kind: 'percentiles' }, read('percentiles.csv'));
    const legendLabels = [...svg.matchAll(/class="legend-label"[^>]*>([^<]*)</g)].map((m) => m[1]);
    expect(legendLabels).toEqual(['median', '25th percentile', '10th percentile', '1st percentile']);
    for (const color of ['blue', 'red', 'green', 'magenta']) {
      expect(svg).toContain(`fill="${color}"`);
      expect(svg).toContain(`stroke="${color}"`);
    }
  });

  it('is byte-stable across repeated renders', () => {
    const a = renderSvg({ inputCsv: '', kind: 'percentiles', title: 'T' }, read('percentiles.csv'));
    const b = renderSvg({ inputCsv: '', kind: 'percentiles', title: 'T' }, read('percentiles.csv'));
    expect(a).toBe(b);
    expect(a.startsWith('<?xml version="1.0" encoding="UTF-8"?>')).toBe(true);
  });

  it('honours custom title and axis labels', () => {
    const svg = renderSvg(
      { inputCsv: '', kind: 'overlay', title: 'my <title>', xLabel: 'param', yLabel: 'val' },
      read('compare.csv'),
    );
    expect(svg).toContain('my &lt;title&gt;');
    expect(svg).toContain('>param<');
    expect(svg).toContain('>val<');
  });
});

describe('cli', () => {
  const cliPath = path.join(here, '..', 'dist', 'cli.js');
  const run = (args: string[]) => {
    try {
      execFileSync('node', [cliPath, ...args], { stdio: 'pipe' });
      return 0;
    } catch (err: any) {
      return err.status as number;
    }
  };

  it('renders all three kinds end to end, byte-stable on disk', () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'plots-'));
    for (const [kind, input] of [
      ['overlay', 'compare.csv'],
      ['abs_err', 'compare.csv'],
      ['percentiles', 'percentiles.csv'],
    ] as const) {
      const out1 = path.join(dir, `${kind}-1.svg`);
      const out2 = path.join(dir, `${kind}-2.svg`);
      expect(run([kind, '--in', fixture(input), '--out', out1])).toBe(0);
      expect(run([kind, '--in', fixture(input), '--out', out2])).toBe(0);
      expect(fs.readFileSync(out1)).toEqual(fs.readFileSync(out2));
      expect(fs.readFileSync(out1, 'utf-8')).toContain('<svg');
    }
  });

  it('exits 2 on bad arguments', () => {
    expect(run(['bogus', '--in', fixture('compare.csv'), '--out', '/tmp/x.svg'])).toBe(2);
    expect(run(['overlay', '--in', fixture('compare.csv'), '--out', '/tmp/x.png'])).toBe(2);
    expect(run(['overlay', '--in', fixture('compare.csv')])).toBe(2);
  });

  it('exits 4 on i/o and schema problems', () => {
    expect(run(['overlay', '--in', '/nonexistent.csv', '--out', '/tmp/x.svg'])).toBe(4);
    expect(run(['overlay', '--in', fixture('empty.csv'), '--out', '/tmp/x.svg'])).toBe(4);
  });
});
