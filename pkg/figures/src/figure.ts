import { writeFileSync } from "fs";

import { velocityProfile } from "./basis.js";
import { assertSharedGrid, column, momentColumns, readSolution } from "./csv.js";
import type { ComparisonSpec, FigureSpec, ProfileSpec } from "./spec.js";
import { MODEL_STYLE, orderDash, renderFigure, type Line, type Panel } from "./svg.js";

function comparisonPanels(spec: ComparisonSpec): { panels: Panel[]; legend: Line[] } {
  const tables = spec.panels.map((panel) => panel.series.map((s) => readSolution(s.csv)));
  assertSharedGrid(tables.flat());
  const panels: Panel[] = [];
  const legend = new Map<string, Line>();
  for (const variable of spec.variables) {
    spec.panels.forEach((panelSpec, idx) => {
      const lines: Line[] = panelSpec.series.map((s, j) => {
        const table = tables[idx][j];
        const style = MODEL_STYLE[s.model];
        const label = s.label ?? s.model;
        const line: Line = {
          xs: column(table, "x"),
          ys: column(table, variable),
          color: style.color,
          dash: style.dash,
          label,
        };
        legend.set(label, line);
        return line;
      });
      panels.push({ title: `${variable}, ${panelSpec.label}`, xLabel: "x", yLabel: variable, lines });
    });
  }
  return { panels, legend: [...legend.values()] };
}

function nearestRow(xs: number[], x0: number): number {
  let best = 0;
  for (let i = 1; i < xs.length; i++) {
    if (Math.abs(xs[i] - x0) < Math.abs(xs[best] - x0)) best = i;
  }
  return best;
}

function profilePanel(spec: ProfileSpec): { panels: Panel[]; legend: Line[] } {
  const tables = spec.series.map((s) => readSolution(s.csv));
  assertSharedGrid(tables);
  const zetas = Array.from({ length: spec.zetaSamples }, (_, i) => i / (spec.zetaSamples - 1));
  const lines: Line[] = spec.series.map((s, j) => {
    const table = tables[j];
    const row = nearestRow(column(table, "x"), spec.x0);
    const um = column(table, "u_m")[row];
    const alphas = momentColumns(table).slice(0, s.n).map((col) => col[row]);
    if (alphas.length < s.n) {
      throw new Error(`${table.path}: needs ${s.n} moment columns, found ${alphas.length}`);
    }
    return {
      xs: zetas,
      ys: velocityProfile(um, alphas, zetas),
      color: MODEL_STYLE[s.model].color,
      dash: s.model === "swe" ? null : orderDash(s.n),
      label: s.label ?? (s.n > 0 ? `${s.model} N=${s.n}` : s.model),
    };
  });
  const panel: Panel = {
    title: `vertical velocity profile at x0 = ${spec.x0}`,
    xLabel: "zeta",
    yLabel: "u",
    lines,
  };
  return { panels: [panel], legend: lines };
}

export function renderSpec(spec: FigureSpec): string {
  if (spec.kind === "comparison") {
    const { panels, legend } = comparisonPanels(spec);
    return renderFigure(panels, spec.variables.length, spec.panels.length, spec.width, spec.height, legend);
  }
  const { panels, legend } = profilePanel(spec);
  return renderFigure(panels, 1, 1, spec.width, spec.height, legend);
}

export function makeFigure(spec: FigureSpec): string {
  const svg = renderSpec(spec);
  writeFileSync(spec.output, svg);
  return spec.output;
}
