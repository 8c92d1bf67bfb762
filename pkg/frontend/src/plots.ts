/** The three figure kinds built from benchmark CSVs:
 *  - overlay: the expectation value (black) and its derivative (blue);
 *  - abs_err: both methods' absolute errors on a log axis
 *    (pulse baseline red, clipped shift rule green);
 *  - percentiles: distribution bands of the relative-error difference
 *    (median blue, 25th red, 10th green, 1st magenta).
 */

import { parseCsv, requireColumn, SchemaError, Table } from './csv.js';

export type PlotKind = 'overlay' | 'abs_err' | 'percentiles';

export interface PlotSpec {
  inputCsv: string;
  kind: PlotKind;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

import { renderChart, Series } from './svg.js';

const PERCENTILE_STYLE: Array<[string, string, string]> = [
  ['median', 'blue', 'median'],
  ['p25', 'red', '25th percentile'],
  ['p10', 'green', '10th percentile'],
  ['p1', 'magenta', '1st percentile'],
];

export function renderSvg(spec: PlotSpec, csvText: string): string {
  const table = parseCsv(csvText);
  const xs = requireColumn(table, 'x');
  switch (spec.kind) {
    case 'overlay':
      return renderChart(
        [
          { label: 'f', color: 'black', xs, ys: requireColumn(table, 'f') },
          { label: "f'", color: 'blue', xs, ys: requireColumn(table, 'fprime_exact') },
        ],
        {
          title: spec.title ?? 'Expectation value and derivative',
          xLabel: spec.xLabel ?? 'x',
          yLabel: spec.yLabel ?? 'value',
        },
      );
    case 'abs_err':
      return renderChart(
        [
          { label: 'pulse baseline', color: 'red', xs, ys: requireColumn(table, 'aspsr_abs_err') },
          { label: 'clipped shift rule', color: 'green', xs, ys: requireColumn(table, 'nyquist_abs_err') },
        ],
        {
          title: spec.title ?? 'Absolute derivative errors',
          xLabel: spec.xLabel ?? 'x',
          yLabel: spec.yLabel ?? 'absolute error',
          logY: true,
        },
      );
    case 'percentiles': {
      const series: Series[] = PERCENTILE_STYLE.map(([name, color, label]) => ({
        label,
        color,
        xs,
        ys: requireColumn(table, name),
      }));
      return renderChart(series, {
        title: spec.title ?? 'Relative-error difference percentiles',
        xLabel: spec.xLabel ?? 'x',
        yLabel: spec.yLabel ?? 'baseline rel err - shift rule rel err',
      });
    }
    default:
      throw new SchemaError(`unknown plot kind ${JSON.stringify(spec.kind)}`);
  }
}

export { SchemaError };
export type { Table };
