/** Parsing of the benchmark CSVs ("# schema=1" header, then named columns). */

export class SchemaError extends Error {}

export interface Table {
  names: string[];
  columns: Map<string, number[]>;
  rows: number;
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0].trim() !== '# schema=1') {
    throw new SchemaError("missing '# schema=1' header line");
  }
  if (lines.length < 2) {
    throw new SchemaError('missing column header line');
  }
  const names = lines[1].split(',').map((s) => s.trim());
  const columns = new Map<string, number[]>(names.map((n) => [n, []]));
  for (const line of lines.slice(2)) {
    const parts = line.split(',');
    if (parts.length !== names.length) {
      throw new SchemaError(`row has ${parts.length} fields, expected ${names.length}`);
    }
    parts.forEach((part, j) => {
      const value = Number(part);
      if (!Number.isFinite(value)) {
        throw new SchemaError(`non-numeric value ${JSON.stringify(part)} in column ${names[j]}`);
      }
      columns.get(names[j])!.push(value);
    });
  }
  const rows = columns.get(names[0])!.length;
  if (rows === 0) {
    throw new SchemaError('no data: row count 0');
  }
  return { names, columns, rows };
}

export function requireColumn(table: Table, name: string): number[] {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new SchemaError(`missing required column ${JSON.stringify(name)}`);
  }
  return col;
}
