import type { ModelName } from "./spec.js";

/** Line-style convention shared by all figures: the classic model is red
 * and solid, the reduced model green and dashed, the full moment model
 * blue and dotted. */
export const MODEL_STYLE: Record<ModelName, { color: string; dash: string | null }> = {
  swe: { color: "red", dash: null },
  rswme: { color: "green", dash: "8,5" },
  swme: { color: "blue", dash: "2,4" },
  hrswme: { color: "darkorange", dash: "10,3,2,3" },
};

/** Dash pattern by moment order for profile figures (2 solid, 4 dashed, 6 dotted). */
export function orderDash(n: number): string | null {
  if (n <= 2) return null;
  if (n <= 4) return "8,5";
  return "2,4";
}

export interface Scale {
  (v: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

const fmt = (v: number) => (Math.abs(v) < 1e-12 ? "0" : v.toPrecision(6)).replace(/\.?0+$/, "");

export function polyline(xs: number[], ys: number[], sx: Scale, sy: Scale): string {
  return xs.map((x, i) => `${fmt(sx(x))},${fmt(sy(ys[i]))}`).join(" ");
}

export interface Line {
  xs: number[];
  ys: number[];
  color: string;
  dash: string | null;
  label: string;
}

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  lines: Line[];
}

function tickValues(lo: number, hi: number, count = 4): number[] {
  const out: number[] = [];
  for (let i = 0; i <= count; i++) out.push(lo +umInterp(i, count) * (hi - lo));
  return out;
}

const umInterp = (i: number, n: number) => i / n;

function renderPanel(panel: Panel, x0: number, y0: number, w: number, h: number): string {
  const margin = { left: 52, right: 10, top: 24, bottom: 34 };
  const plotW = w - margin.left - margin.right;
  const plotH = h - margin.top - margin.bottom;
  const allX = panel.lines.flatMap((l) => l.xs);
  const allY = panel.lines.flatMap((l) => l.ys);
  const [dx0, dx1] = extent(allX);
  const [dy0, dy1] = extent(allY);
  const sx = linearScale(dx0, dx1, x0 + margin.left, x0 + margin.left + plotW);
  const sy = linearScale(dy0, dy1, y0 + margin.top + plotH, y0 + margin.top);

  const parts: string[] = [];
  parts.push(`<rect x="${x0 + margin.left}" y="${y0 + margin.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#888" stroke-width="1"/>`);
  parts.push(`<text x="${x0 + margin.left + plotW / 2}" y="${y0 + 14}" text-anchor="middle" font-size="13" class="panel-title">${panel.title}</text>`);
  for (const t of tickValues(dx0, dx1)) {
    const px = sx(t);
    parts.push(`<line x1="${fmt(px)}" y1="${y0 + margin.top + plotH}" x2="${fmt(px)}" y2="${y0 + margin.top + plotH + 4}" stroke="#444"/>`);
    parts.push(`<text x="${fmt(px)}" y="${y0 + margin.top + plotH + 16}" text-anchor="middle" font-size="10">${fmt(t)}</text>`);
  }
  for (const t of tickValues(dy0, dy1)) {
    const py = sy(t);
    parts.push(`<line x1="${x0 + margin.left - 4}" y1="${fmt(py)}" x2="${x0 + margin.left}" y2="${fmt(py)}" stroke="#444"/>`);
    parts.push(`<text x="${x0 + margin.left - 6}" y="${fmt(py + 3)}" text-anchor="end" font-size="10">${fmt(t)}</text>`);
  }
  parts.push(`<text x="${x0 + margin.left + plotW / 2}" y="${y0 + h - 4}" text-anchor="middle" font-size="11">${panel.xLabel}</text>`);
  parts.push(`<text x="${x0 + 12}" y="${y0 + margin.top + plotH / 2}" text-anchor="middle" font-size="11" transform="rotate(-90 ${x0 + 12} ${y0 + margin.top + plotH / 2})">${panel.yLabel}</text>`);
  for (const line of panel.lines) {
    const dash = line.dash ? ` stroke-dasharray="${line.dash}"` : "";
    parts.push(`<polyline points="${polyline(line.xs, line.ys, sx, sy)}" fill="none" stroke="${line.color}" stroke-width="1.5"${dash} data-label="${line.label}"/>`);
  }
  return parts.join("\n");
}

export function renderFigure(panels: Panel[], rows: number, cols: number,
                             width: number, height: number, legend: Line[]): string {
  const legendH = 28;
  const panelW = width / cols;
  const panelH = (height - legendH) / rows;
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  panels.forEach((panel, index) => {
    const r = Math.floor(index / cols);
    const c = index % cols;
    parts.push(renderPanel(panel, c * panelW, legendH + r * panelH, panelW, panelH));
  });
  let lx = 16;
  for (const item of legend) {
    const dash = item.dash ? ` stroke-dasharray="${item.dash}"` : "";
    parts.push(`<line x1="${lx}" y1="14" x2="${lx + 30}" y2="14" stroke="${item.color}" stroke-width="2"${dash}/>`);
    parts.push(`<text x="${lx + 36}" y="18" font-size="12">${item.label}</text>`);
    lx += 46 + 8 * item.label.length;
  }
  parts.push("</svg>");
  return parts.join("\n");
}
