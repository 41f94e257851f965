import { readFileSync } from "fs";
import { z } from "zod";

const model = z.enum(["swe", "swme", "rswme", "hrswme"]);

const comparisonSeries = z.object({
  model,
  csv: z.string(),
  label: z.string().optional(),
});

const comparisonPanel = z.object({
  label: z.string(),
  series: z.array(comparisonSeries).min(1),
});

/** Grid of line panels: one column per panel, one row per variable. */
export const comparisonSpec = z.object({
  kind: z.literal("comparison"),
  variables: z.array(z.string()).min(1).default(["h", "u_m"]),
  panels: z.array(comparisonPanel).min(1),
  output: z.string(),
  width: z.number().positive().default(1200),
  height: z.number().positive().default(700),
});

const profileSeries = z.object({
  model,
  n: z.number().int().min(0),
  csv: z.string(),
  label: z.string().optional(),
});

/** Vertical velocity profile u(x0, zeta) reconstructed from moment columns. */
export const profileSpec = z.object({
  kind: z.literal("profile"),
  x0: z.number(),
  series: z.array(profileSeries).min(1),
  zetaSamples: z.number().int().min(8).default(101),
  output: z.string(),
  width: z.number().positive().default(640),
  height: z.number().positive().default(520),
});

export const figureSpec = z.discriminatedUnion("kind", [comparisonSpec, profileSpec]);

export type ComparisonSpec = z.infer<typeof comparisonSpec>;
export type ProfileSpec = z.infer<typeof profileSpec>;
export type FigureSpec = z.infer<typeof figureSpec>;
export type ModelName = z.infer<typeof model>;

export function loadSpec(path: string): FigureSpec {
  const raw = JSON.parse(readFileSync(path, "utf8"));
  const parsed = figureSpec.safeParse(raw);
  if (!parsed.success) {
    throw new Error(`${path}: invalid figure spec: ${parsed.error.issues
      .map((issue) => `${issue.path.join(".")}: ${issue.message}`)
      .join("; ")}`);
  }
  return parsed.data;
}
