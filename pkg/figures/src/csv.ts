import { readFileSync } from "fs";

export interface SolutionTable {
  path: string;
  columns: string[];
  data: Map<string, number[]>;
}

/** Read one solver solution CSV (x,h,u_m[,alpha_1..alpha_N][,dx_h4]). */
export function readSolution(path: string): SolutionTable {
  const text = readFileSync(path, "utf8").trim();
  const lines = text.split(/\r?\n/);
  if (lines.length < 2) {
    throw new Error(`${path}: no data rows`);
  }
  const columns = lines[0].split(",");
  if (columns[0] !== "x") {
    throw new Error(`${path}: expected first column 'x', got '${columns[0]}'`);
  }
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new Error(`${path}:${i + 1}: expected ${columns.length} cells, got ${cells.length}`);
    }
    cells.forEach((cell, j) => {
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new Error(`${path}:${i + 1}: non-numeric cell '${cell}'`);
      }
      data.get(columns[j])!.push(value);
    });
  }
  return { path, columns, data };
}

export function column(table: SolutionTable, name: string): number[] {
  const values = table.data.get(name);
  if (!values) {
    throw new Error(`${table.path}: missing column '${name}' (has ${table.columns.join(", ")})`);
  }
  return values;
}

export function momentColumns(table: SolutionTable): number[][] {
  const moments: number[][] = [];
  for (let j = 1; table.data.has(`alpha_${j}`); j++) {
    moments.push(column(table, `alpha_${j}`));
  }
  return moments;
}

/** All tables in one figure must share the x grid exactly. */
export function assertSharedGrid(tables: SolutionTable[]): number[] {
  const base = column(tables[0], "x");
  for (const table of tables.slice(1)) {
    const x = column(table, "x");
    if (x.length !== base.length || x.some((v, i) => v !== base[i])) {
      throw new Error(`grid mismatch: ${table.path} does not share the x grid of ${tables[0].path}`);
    }
  }
  return base;
}
